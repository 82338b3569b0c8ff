#include "maxkvc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace maxkvc {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Provenance::header_comment() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "# config_hash=%016llx, master_seed=%llu, code_version=%s",
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(master_seed),
                code_version.c_str());
  return buf;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string csv_cell(const std::string& value) { return value; }
std::string csv_cell(const char* value) { return value; }
std::string csv_cell(double value) { return format_double(value); }
std::string csv_cell(int value) { return std::to_string(value); }
std::string csv_cell(std::int64_t value) { return std::to_string(value); }
std::string csv_cell(std::uint64_t value) { return std::to_string(value); }

CsvWriter::CsvWriter(const Provenance& provenance) {
  buffer_ = provenance.header_comment();
  buffer_ += '\n';
}

void CsvWriter::comment(const std::string& text) {
  buffer_ += "# ";
  buffer_ += text;
  buffer_ += '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  append_row(columns);
}

void CsvWriter::append_row(const std::vector<std::string>& parts) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) buffer_ += ',';
    buffer_ += parts[i];
  }
  buffer_ += '\n';
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for read: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string spectrum_csv(const std::vector<SpectrumLine>& spectrum,
                         const Provenance& provenance) {
  CsvWriter csv(provenance);
  csv.header({"eigenvalue", "multiplicity"});
  for (const auto& line : spectrum)
    csv.row(line.eigenvalue, line.multiplicity);
  return csv.str();
}

std::string sparse_coord_dump(const Eigen::SparseMatrix<double>& matrix) {
  std::string out;
  for (int col = 0; col < matrix.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, col); it;
         ++it) {
      out += std::to_string(it.row());
      out += ' ';
      out += std::to_string(it.col());
      out += ' ';
      out += format_double(it.value());
      out += '\n';
    }
  return out;
}

}  // namespace maxkvc
