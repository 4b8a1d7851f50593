#ifndef LOGWG_IO_HPP
#define LOGWG_IO_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "logwg/domain.hpp"

namespace logwg {

/// Snapshot format: one header line
///   LOGNS1 d=<d> n=<n> nx=<points_x> ny=<points_y> L=<half_width>
/// then (re, im) pairs of little-endian IEEE doubles in row-major order.
class SnapshotError : public std::runtime_error {
public:
  enum class Kind { Io, BadMagic, BadHeader, Truncated, DimensionMismatch };
  SnapshotError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

void write_field_snapshot(const Field& field, const std::filesystem::path& path);
Field read_field_snapshot(const std::filesystem::path& path);
/// Also throws DimensionMismatch unless the stored grid equals `expected`.
Field read_field_snapshot(const std::filesystem::path& path, const GridSpec& expected);

class CsvError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using CsvValue = std::variant<Real, long long, bool, std::string>;
using CsvRow = std::vector<CsvValue>;

/// Doubles with 17 significant digits, bools as 0/1, LF line ends. Throws
/// CsvError on a width mismatch or a non-finite double.
std::string format_csv(const std::vector<std::string>& header, const std::vector<CsvRow>& rows);
/// format_csv then write; nothing is written when formatting fails.
void emit_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
              const std::vector<CsvRow>& rows);

/// %.17g
std::string format_real(Real value);

namespace schema {
extern const std::vector<std::string> mu_scan;
extern const std::vector<std::string> trajectory;
extern const std::vector<std::string> groundstate;
extern const std::vector<std::string> energy_history;
extern const std::vector<std::string> tent_bounds;
extern const std::vector<std::string> eigen_scan;
extern const std::vector<std::string> oracle;
} // namespace schema

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// `key = value` lines; `#` starts a comment; blank lines ignored. Duplicate
/// keys and lines without '=' throw ConfigError naming the line.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Write to a temporary sibling, then rename over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace logwg

#endif // LOGWG_IO_HPP
