#include "dwdm/csvio.hpp"

#include <cstdio>
#include <stdexcept>
#include <unistd.h>

namespace dwdm {

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

std::string CsvWriter::format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void CsvWriter::add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    add_row_raw(cells);
}

void CsvWriter::add_row_raw(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size())
        throw std::invalid_argument("row width does not match header");
    rows_.push_back(cells);
}

std::string CsvWriter::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out += ',';
        out += header_[i];
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

void CsvWriter::write(const std::string& path_or_dash) const {
    const std::string data = to_string();
    if (path_or_dash == "-") {
        if (std::fwrite(data.data(), 1, data.size(), stdout) != data.size())
            throw std::runtime_error("failed to stream csv to stdout");
        std::fflush(stdout);
        return;
    }
    write_file_atomic(path_or_dash, data);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmpXXXXXX";
    std::string tmp_path = tmp;
    const int fd = mkstemp(tmp_path.data());
    if (fd < 0) throw std::runtime_error("cannot create temporary file near " + path);
    FILE* f = fdopen(fd, "wb");
    if (!f) {
        close(fd);
        std::remove(tmp_path.c_str());
        throw std::runtime_error("cannot open temporary file near " + path);
    }
    const bool ok = std::fwrite(contents.data(), 1, contents.size(), f) == contents.size();
    if (std::fclose(f) != 0 || !ok) {
        std::remove(tmp_path.c_str());
        throw std::runtime_error("failed writing " + path);
    }
    if (std::rename(tmp_path.c_str(), path.c_str()) != 0) {
        std::remove(tmp_path.c_str());
        throw std::runtime_error("failed to move output into place at " + path);
    }
}

} // namespace dwdm
