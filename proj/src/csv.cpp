#include "paraflat/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace paraflat {

std::string format_full(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl)
{
    impl_->out.open(path);
    if (!impl_->out) {
        delete impl_;
        throw std::runtime_error("csv: cannot open " + path + " for writing");
    }
}

CsvWriter::~CsvWriter()
{
    delete impl_;
}

void CsvWriter::header(const std::vector<std::string>& names)
{
    for (std::size_t i = 0; i < names.size(); ++i)
        impl_->out << names[i] << (i + 1 < names.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values)
{
    for (std::size_t i = 0; i < values.size(); ++i)
        impl_->out << format_full(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

std::size_t CsvTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::runtime_error("csv: no column named " + name);
}

CsvTable read_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        if (first) {
            while (std::getline(ls, cell, ',')) table.header.push_back(cell);
            first = false;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace paraflat
