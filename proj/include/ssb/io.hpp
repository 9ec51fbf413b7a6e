#pragma once

// CSV and JSON emission. Doubles are written with 17 significant digits so
// files round-trip bit-exactly; infinities appear as `inf`.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ssb/tomography.hpp"
#include "ssb/wigner.hpp"

namespace ssb::io {

std::string format_double(double x);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t h);
std::string file_checksum(const std::filesystem::path& path);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& values);
  /// Row with a trailing text field.
  void add_row(const std::vector<double>& values, const std::string& label);

  std::size_t size() const { return rows_; }
  std::string str() const { return body_; }
  void write(const std::filesystem::path& path) const;

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string body_;
};

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

/// q, p, w rows (q outer, p inner) and a JSON sidecar `<path>.json`.
void write_wigner(const std::filesystem::path& path, const WignerGridd& grid);
WignerGridd load_wigner(const std::filesystem::path& path);

/// angle, x, probability
void write_quadratures(const std::filesystem::path& path, const QuadratureSet& set);
/// angle, sample_index, value
void write_samples(const std::filesystem::path& path, const std::vector<double>& angles,
                   const std::vector<std::vector<double>>& samples);

}  // namespace ssb::io
