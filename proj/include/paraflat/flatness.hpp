#pragma once

#include <functional>
#include <vector>

#include "paraflat/discretize.hpp"
#include "paraflat/jet.hpp"

namespace paraflat {

/// The flat parametrization of a semi-discrete system: the d[j][k] table
/// mapping flat-output derivatives to state components and the input
/// coefficients a[k].
struct FlatTable {
    int n = 0;
    int K = 0;
    /// d[j-1][k], j = 1..n, k = 0..K; d[j][k] = 0 whenever j <= k.
    std::vector<std::vector<double>> d;
    /// a[k], k = 0..K.
    std::vector<double> a;
    double flat_output_scale = 0.0;  // alpha0 - q0*beta0
    double max_intermediate = 0.0;   // largest |d| seen while filling the table

    double dval(int j, int k) const { return d[j - 1][k]; }
};

FlatTable flat_table(const SemiDiscreteSystem& sys, int K);

/// State reconstruction v_j = sum_k d[j][k] y^(k) from a jet of y.
std::vector<double> flat_state(const FlatTable& tab, const TaylorJet& y_jet);

/// Input value sum_{k<=i} a[k] y^(k) from a jet of y (jet order >= i).
double input_from_jet(const FlatTable& tab, const TaylorJet& y_jet, int truncation);
/// Input derivative via the shifted sum (jet order >= i+1).
double input_deriv_from_jet(const FlatTable& tab, const TaylorJet& y_jet, int truncation);

struct SampledSignal {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> derivatives;  // may be empty
};

/// Sample the synthesized input on a time grid; jets(t, order) supplies the
/// flat-output jet at t.
SampledSignal synthesize_input(const FlatTable& tab,
                               const std::function<TaylorJet(double, int)>& jets,
                               const std::vector<double>& times, int truncation);

/// (2k-2)! with the k <= 1 convention of value 1.
double shifted_factorial(int k);

/// Smallest R with |a[k]| <= R^(k+1)/(2k-2)! over the table.
double fit_coefficient_radius(const FlatTable& tab);

struct CoefficientStudy {
    std::vector<int> n_list;
    int k_max = 0;
    /// a[n_index][k]
    std::vector<std::vector<double>> a;
    /// cauchy[i][k] = |a(n_{i+1}, k) - a(n_i, k)| for consecutive doublings
    std::vector<std::vector<double>> cauchy;
    double fitted_radius = 0.0;
};

CoefficientStudy coefficient_limit_study(const ParabolicProblem& p, int k_max,
                                         const std::vector<int>& n_list);

}  // namespace paraflat
