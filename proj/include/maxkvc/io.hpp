#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "maxkvc/operators.hpp"

namespace maxkvc {

std::uint64_t fnv1a64(std::string_view bytes);

/// Identifies the (config, seed, code) triple that produced an artifact.
/// Files carrying equal triples are byte-identical across runs.
struct Provenance {
  std::uint64_t config_hash = 0;
  std::uint64_t master_seed = 0;
  std::string code_version;

  std::string header_comment() const;
};

/// Locale-independent formatting used for every CSV cell.
std::string format_double(double value);

std::string csv_cell(const std::string& value);
std::string csv_cell(const char* value);
std::string csv_cell(double value);
std::string csv_cell(int value);
std::string csv_cell(std::int64_t value);
std::string csv_cell(std::uint64_t value);

/// Accumulates a CSV document with a provenance header comment.
class CsvWriter {
 public:
  explicit CsvWriter(const Provenance& provenance);

  void comment(const std::string& text);
  void header(const std::vector<std::string>& columns);

  template <typename... Ts>
  void row(const Ts&... cells) {
    std::vector<std::string> parts{csv_cell(cells)...};
    append_row(parts);
  }

  const std::string& str() const { return buffer_; }

 private:
  void append_row(const std::vector<std::string>& parts);

  std::string buffer_;
};

/// Writes content to path, creating parent directories. Throws on failure.
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

/// CSV rows (eigenvalue, multiplicity) for a spectrum.
std::string spectrum_csv(const std::vector<SpectrumLine>& spectrum,
                         const Provenance& provenance);

/// Coordinate-format text (row col value), one nonzero per line, for
/// cross-validation against external tools.
std::string sparse_coord_dump(const Eigen::SparseMatrix<double>& matrix);

}  // namespace maxkvc
