#include "ssb/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ssb/errors.hpp"

namespace ssb::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_checksum(const std::filesystem::path& path) { return hex64(fnv1a64(read_text(path))); }

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  detail::require(!header.empty(), "CSV header must not be empty");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) body_ += ',';
    body_ += header[i];
  }
  body_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& values) {
  detail::require(values.size() == columns_, "CSV row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_double(values[i]);
  }
  body_ += '\n';
  ++rows_;
}

void CsvTable::add_row(const std::vector<double>& values, const std::string& label) {
  detail::require(values.size() + 1 == columns_, "CSV row width does not match the header");
  for (double v : values) {
    body_ += format_double(v);
    body_ += ',';
  }
  body_ += label;
  body_ += '\n';
  ++rows_;
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, body_); }

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

nlohmann::json axis_meta(const Eigen::VectorXd& axis) {
  return {{"min", axis(0)}, {"max", axis(axis.size() - 1)}, {"points", axis.size()}};
}

}  // namespace

void write_wigner(const std::filesystem::path& path, const WignerGridd& grid) {
  CsvTable table({"q", "p", "w"});
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    for (Eigen::Index j = 0; j < grid.cols(); ++j) table.add_row({grid.q_axis(i), grid.p_axis(j), grid.values(i, j)});
  }
  table.write(path);
  const nlohmann::json meta = {{"t", grid.t},
                               {"big_n", grid.big_n},
                               {"frame_scale", grid.frame_scale},
                               {"q_axis", axis_meta(grid.q_axis)},
                               {"p_axis", axis_meta(grid.p_axis)},
                               {"mass", grid_mass(grid)},
                               {"layout", "q outer, p inner"}};
  write_text(path.string() + ".json", meta.dump(2) + "\n");
}

WignerGridd load_wigner(const std::filesystem::path& path) {
  const nlohmann::json meta = nlohmann::json::parse(read_text(path.string() + ".json"));
  const auto nq = meta.at("q_axis").at("points").get<Eigen::Index>();
  const auto np = meta.at("p_axis").at("points").get<Eigen::Index>();
  WignerGridd g;
  g.t = meta.at("t").get<double>();
  g.big_n = meta.at("big_n").get<double>();
  g.frame_scale = meta.at("frame_scale").get<double>();
  g.q_axis.resize(nq);
  g.p_axis.resize(np);
  g.values.resize(nq, np);

  std::istringstream in(read_text(path));
  std::string line;
  std::getline(in, line);
  detail::require(line == "q,p,w", "unexpected Wigner CSV header in " + path.string());
  for (Eigen::Index i = 0; i < nq; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      detail::require(static_cast<bool>(std::getline(in, line)), "truncated Wigner CSV " + path.string());
      double q = 0, p = 0, w = 0;
      detail::require(std::sscanf(line.c_str(), "%lf,%lf,%lf", &q, &p, &w) == 3, "malformed Wigner CSV row: " + line);
      g.q_axis(i) = q;
      g.p_axis(j) = p;
      g.values(i, j) = w;
    }
  }
  return g;
}

void write_quadratures(const std::filesystem::path& path, const QuadratureSet& set) {
  CsvTable table({"angle", "x", "probability"});
  for (std::size_t a = 0; a < set.angles.size(); ++a) {
    for (Eigen::Index i = 0; i < set.x_axis.size(); ++i) {
      table.add_row({set.angles[a], set.x_axis(i), set.distributions(static_cast<Eigen::Index>(a), i)});
    }
  }
  table.write(path);
}

void write_samples(const std::filesystem::path& path, const std::vector<double>& angles,
                   const std::vector<std::vector<double>>& samples) {
  detail::require(angles.size() == samples.size(), "one sample list per angle expected");
  CsvTable table({"angle", "sample_index", "value"});
  for (std::size_t a = 0; a < angles.size(); ++a) {
    for (std::size_t s = 0; s < samples[a].size(); ++s) {
      table.add_row({angles[a], static_cast<double>(s), samples[a][s]});
    }
  }
  table.write(path);
}

}  // namespace ssb::io
