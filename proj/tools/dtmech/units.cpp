#include "units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dtmech {

namespace {

constexpr double kElectronVolt = 1.602176634e-19;
constexpr double kJulianYear = 3.15576e7;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Longest numeric prefix; the rest is the unit.
std::pair<double, std::string_view> split_number(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr == text.data())
    throw UsageError(std::string(what) + ": expected a number, got '" + std::string(text) + "'");
  std::string_view unit = trim(std::string_view(res.ptr, text.data() + text.size() - res.ptr));
  return {v, unit};
}

}  // namespace

double parse_real(std::string_view text, std::string_view what) {
  auto [v, rest] = split_number(text, what);
  if (!rest.empty()) throw UsageError(std::string(what) + ": trailing characters in '" + std::string(text) + "'");
  return v;
}

long long parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  long long v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw UsageError(std::string(what) + ": expected an integer, got '" + std::string(text) + "'");
  return v;
}

double energy_unit_factor(std::string_view unit) {
  if (unit == "meV") return 1e-3 * kElectronVolt;
  if (unit == "eV") return kElectronVolt;
  if (unit == "J") return 1.0;
  throw UsageError("unknown energy unit '" + std::string(unit) + "' (use meV, eV or J)");
}

double parse_quantity(std::string_view text, Dimension dim, Preset preset) {
  const char* what = dim == Dimension::energy ? "energy" : "time";
  auto [v, unit] = split_number(text, what);
  if (!std::isfinite(v)) throw UsageError(std::string(what) + " must be finite");
  if (preset == Preset::natural) {
    if (!unit.empty())
      throw UsageError(std::string(what) + " '" + std::string(text) + "': units need --preset si-planck");
    return v;
  }
  if (unit.empty())
    throw UsageError(std::string(what) + " '" + std::string(text) + "' needs a unit suffix in SI mode");
  if (dim == Dimension::energy) return v * energy_unit_factor(unit);
  if (unit == "s") return v;
  if (unit == "yr") return v * kJulianYear;
  throw UsageError("unknown time unit '" + std::string(unit) + "' (use s or yr)");
}

}  // namespace dtmech
