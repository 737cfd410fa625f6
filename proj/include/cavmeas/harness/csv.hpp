#pragma once

#include <istream>
#include <string>
#include <vector>

namespace cavmeas::harness {

// RFC 4180 quoting: fields containing a comma, quote, CR or LF are quoted
// and embedded quotes doubled. Lines end in "\n".
std::string csv_field(const std::string& s);

// Shortest representation that round-trips; locale independent.
std::string fmt(double v);
std::string fmt(long v);
inline std::string fmt(int v) { return fmt(static_cast<long>(v)); }
inline std::string fmt(unsigned long v) { return std::to_string(v); }

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& row(std::vector<std::string> fields);

    std::size_t rows() const { return rows_.size(); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Parses RFC 4180 text, header included. Throws IoError on malformed quoting.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

}  // namespace cavmeas::harness
