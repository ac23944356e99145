#pragma once

#include <string>
#include <vector>

namespace dwdm {

/// CSV sink with a stable wire format: header row, comma separation, floats
/// at nine significant digits, LF endings.  File targets are written to a
/// temporary and renamed on success, so failed runs never leave partial
/// output; "-" streams to stdout.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(const std::vector<double>& values);
    void add_row_raw(const std::vector<std::string>& cells);

    std::string to_string() const;
    void write(const std::string& path_or_dash) const;

    static std::string format_number(double v);

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Atomic small-file write (temp + rename), shared with manifest emission.
void write_file_atomic(const std::string& path, const std::string& contents);

} // namespace dwdm
