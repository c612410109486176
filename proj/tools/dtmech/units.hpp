#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dtmech {

enum class Preset { natural, si_planck };
enum class Dimension { energy, time };

// Thrown for anything the user typed wrong; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_real(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

// "7meV", "1.5 eV", "2e-3J", "5.4e-44s", "3yr". In natural units only bare numbers are
// accepted; with the SI preset a suffix is mandatory. Returns J or s (SI) or the bare number.
double parse_quantity(std::string_view text, Dimension dim, Preset preset);

// Multiplier to SI for an energy unit name (meV, eV, J); throws UsageError otherwise.
double energy_unit_factor(std::string_view unit);

}  // namespace dtmech
