#pragma once

#include <string>
#include <vector>

namespace paraflat {

/// CSV writing with 17 significant digits so that 64-bit values round-trip
/// exactly; '.' decimal separator, header row first.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void header(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);

  private:
    struct Impl;
    Impl* impl_;
};

std::string format_full(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace paraflat
