#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "paraflat/jet.hpp"

using namespace paraflat;

TEST_SUITE("jet")
{
    TEST_CASE("exp jet of the identity reproduces e^t at every order")
    {
        const double t = 0.7;
        const TaylorJet j = jet_exp(TaylorJet::variable(t, 3));
        for (int m = 0; m <= 3; ++m) CHECK(j.coeffs[m] == doctest::Approx(std::exp(t)).epsilon(1e-15));
    }

    TEST_CASE("product jet of t*t at t=1")
    {
        const TaylorJet t = TaylorJet::variable(1.0, 2);
        const TaylorJet j = jet_mul(t, t);
        CHECK(j.coeffs[0] == 1.0);
        CHECK(j.coeffs[1] == 2.0);
        CHECK(j.coeffs[2] == 2.0);
    }

    TEST_CASE("reciprocal-square jet matches finite differences at t=1/2")
    {
        auto f = [](double t) {
            const double z = t * (1.0 - t);
            return 1.0 / (z * z);
        };
        auto jet_of = [](double t, int order) {
            TaylorJet z = jet_mul(TaylorJet::variable(t, order),
                                  jet_sub(TaylorJet::constant(1.0, t, order),
                                          TaylorJet::variable(t, order)));
            return jet_pow_real(z, -2.0);
        };
        const TaylorJet j = jet_of(0.5, 4);

        // Low orders against central differences at the stated step.
        const double h = 1e-4;
        CHECK(j.coeffs[0] == doctest::Approx(f(0.5)).epsilon(1e-12));
        const double fd1 = (f(0.5 + h) - f(0.5 - h)) / (2 * h);
        CHECK(std::abs(j.coeffs[1] - fd1) <= 1e-6 * std::abs(f(0.5)) + 1e-9);
        const double fd2 = (f(0.5 + h) - 2 * f(0.5) + f(0.5 - h)) / (h * h);
        CHECK(j.coeffs[2] == doctest::Approx(fd2).epsilon(1e-6));

        // Order 4 needs a larger step; Richardson-extrapolate two widths.
        auto fd4 = [&](double step) {
            return (f(0.5 - 2 * step) - 4 * f(0.5 - step) + 6 * f(0.5) - 4 * f(0.5 + step) +
                    f(0.5 + 2 * step)) /
                   std::pow(step, 4);
        };
        const double c1 = fd4(2e-3), c2 = fd4(1e-3);
        const double extrap = c2 + (c2 - c1) / 3.0;
        CHECK(j.coeffs[4] == doctest::Approx(extrap).epsilon(1e-4));

        // Closed form from the series 16 + 128 u^2 + 768 u^4 around 1/2.
        CHECK(j.coeffs[0] == doctest::Approx(16.0).epsilon(1e-14));
        CHECK(j.coeffs[2] == doctest::Approx(256.0).epsilon(1e-12));
        CHECK(j.coeffs[4] == doctest::Approx(18432.0).epsilon(1e-12));
    }

    TEST_CASE("reciprocal of a zero-valued jet throws")
    {
        CHECK_THROWS_AS((void)jet_reciprocal(TaylorJet::variable(0.0, 2)), std::domain_error);
    }

    TEST_CASE("log inverts exp through the jet algebra")
    {
        const TaylorJet u = jet_mul(TaylorJet::variable(0.3, 5), TaylorJet::variable(0.3, 5));
        const TaylorJet round = jet_log(jet_exp(u));
        for (int m = 0; m <= 5; ++m)
            CHECK(round.coeffs[m] == doctest::Approx(u.coeffs[m]).epsilon(1e-12));
    }

    TEST_CASE("sin/cos jets satisfy the Pythagorean identity entrywise")
    {
        TaylorJet s, c;
        jet_sin_cos(TaylorJet::variable(1.1, 6), s, c);
        const TaylorJet one = jet_add(jet_mul(s, s), jet_mul(c, c));
        CHECK(one.coeffs[0] == doctest::Approx(1.0).epsilon(1e-14));
        for (int m = 1; m <= 6; ++m) CHECK(std::abs(one.coeffs[m]) < 1e-10);
    }
}
