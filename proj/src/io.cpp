#include "logwg/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace logwg {

namespace {

constexpr const char* kMagic = "LOGNS1";

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffU) << (8 * (7 - i));
  return out;
}

void put_double(std::string& buf, Real x) {
  const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(x));
  char bytes[8];
  std::memcpy(bytes, &bits, 8);
  buf.append(bytes, 8);
}

Real get_double(const char* p) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, p, 8);
  return std::bit_cast<Real>(to_little(bits));
}

std::string header_line(const GridSpec& g) {
  return std::string(kMagic) + " d=" + std::to_string(g.d) + " n=" + std::to_string(g.n) +
         " nx=" + std::to_string(g.points_x) + " ny=" + std::to_string(g.points_y) + " L=" + format_real(g.half_width) +
         "\n";
}

GridSpec parse_header(const std::string& line) {
  std::istringstream in(line);
  std::string magic;
  in >> magic;
  if (magic != kMagic) throw SnapshotError(SnapshotError::Kind::BadMagic, "snapshot: bad magic '" + magic + "'");
  std::map<std::string, std::string> kv;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw SnapshotError(SnapshotError::Kind::BadHeader, "snapshot: bad token " + token);
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  GridSpec g;
  try {
    g.d = std::stoi(kv.at("d"));
    g.n = std::stoi(kv.at("n"));
    g.points_x = std::stoi(kv.at("nx"));
    g.points_y = std::stoi(kv.at("ny"));
    g.half_width = std::stod(kv.at("L"));
    g.validate();
  } catch (const std::exception& e) {
    throw SnapshotError(SnapshotError::Kind::BadHeader, std::string("snapshot: invalid header: ") + e.what());
  }
  return g;
}

} // namespace

std::string format_real(Real value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_field_snapshot(const Field& field, const std::filesystem::path& path) {
  field.grid.validate();
  std::string buf = header_line(field.grid);
  buf.reserve(buf.size() + 16 * static_cast<std::size_t>(field.samples.size()));
  for (Eigen::Index i = 0; i < field.samples.size(); ++i) {
    put_double(buf, field.samples[i].real());
    put_double(buf, field.samples[i].imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError(SnapshotError::Kind::Io, "snapshot: cannot open " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw SnapshotError(SnapshotError::Kind::Io, "snapshot: write failed for " + path.string());
}

Field read_field_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError(SnapshotError::Kind::Io, "snapshot: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw SnapshotError(SnapshotError::Kind::BadMagic, "snapshot: empty file");
  const GridSpec grid = parse_header(line);
  const std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::size_t expected = 16 * static_cast<std::size_t>(grid.size());
  if (payload.size() < expected)
    throw SnapshotError(SnapshotError::Kind::Truncated, "snapshot: truncated payload, expected " +
                                                            std::to_string(expected) + " bytes, found " +
                                                            std::to_string(payload.size()));
  if (payload.size() > expected)
    throw SnapshotError(SnapshotError::Kind::DimensionMismatch, "snapshot: payload of " +
                                                                    std::to_string(payload.size()) +
                                                                    " bytes does not match header (" +
                                                                    std::to_string(expected) + " bytes)");
  Field out(grid);
  for (Eigen::Index i = 0; i < out.samples.size(); ++i) {
    const char* p = payload.data() + 16 * i;
    out.samples[i] = Complex(get_double(p), get_double(p + 8));
  }
  return out;
}

Field read_field_snapshot(const std::filesystem::path& path, const GridSpec& expected) {
  Field f = read_field_snapshot(path);
  if (!(f.grid == expected))
    throw SnapshotError(SnapshotError::Kind::DimensionMismatch,
                        "snapshot: stored grid '" + header_line(f.grid).substr(0, header_line(f.grid).size() - 1) +
                            "' differs from the configured grid");
  return f;
}

std::string format_csv(const std::vector<std::string>& header, const std::vector<CsvRow>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.size() != header.size())
      throw CsvError("csv: row " + std::to_string(r) + " has " + std::to_string(row.size()) + " cells, schema has " +
                     std::to_string(header.size()));
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      if (const Real* x = std::get_if<Real>(&row[c])) {
        if (!std::isfinite(*x))
          throw CsvError("csv: non-finite value in row " + std::to_string(r) + ", column " + header[c]);
        out += format_real(*x);
      } else if (const long long* k = std::get_if<long long>(&row[c])) {
        out += std::to_string(*k);
      } else if (const bool* b = std::get_if<bool>(&row[c])) {
        out += *b ? '1' : '0';
      } else {
        out += std::get<std::string>(row[c]);
      }
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
              const std::vector<CsvRow>& rows) {
  const std::string text = format_csv(header, rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CsvError("csv: cannot open " + path.string());
  out << text;
  if (!out) throw CsvError("csv: write failed for " + path.string());
}

namespace schema {
const std::vector<std::string> mu_scan{"mu", "m", "Kx", "Ky", "muKy", "lambda", "gap", "ydep", "converged"};
const std::vector<std::string> trajectory{"t", "mass", "energy", "orbdist", "boundary_mass"};
const std::vector<std::string> groundstate{"mu",        "mass",     "m",        "Kx",
                                           "Ky",        "muKy",     "lambda_rayleigh", "lambda_energy",
                                           "residual",  "steps",    "converged", "boundary_mass",
                                           "pohozaev",  "reduced_ref"};
const std::vector<std::string> energy_history{"step", "energy"};
const std::vector<std::string> tent_bounds{"a",          "eps_moll", "norm_sq",   "norm_sq_moll",
                                           "main_term",  "correction", "correction_limit", "i0",
                                           "reference",  "strict"};
const std::vector<std::string> eigen_scan{"r",     "energy",           "lower_printed", "lower_rederived",
                                          "upper", "in_window_printed", "in_window_rederived", "negative"};
const std::vector<std::string> oracle{"d",         "n",         "mass",           "reduced_mass", "lambda",
                                      "amplitude", "reduced_energy", "reference", "sampled_energy", "pde_residual"};
} // namespace schema

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    if (!out.emplace(key, value).second)
      throw ConfigError("config line " + std::to_string(number) + ": duplicate key '" + key + "'");
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

} // namespace logwg
