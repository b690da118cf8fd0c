#pragma once

#include "anyent/state.hpp"

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace anyent {

class StateFormatError : public std::runtime_error {
  public:
    StateFormatError(const std::string &what, int line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

  private:
    int line_;
};

/// Header `state <model> A=<list> B=<list>` (plus `internal=<dA>,<dB>` when
/// either party carries an ancilla factor), then per non-empty sector
/// `sector c=<charge>`, `dim <n>` and n rows of `re+imj` entries.
void write_state(std::ostream &os, const AnyonicDensityMatrix &rho);
std::string render_state(const AnyonicDensityMatrix &rho);

/// `resolve` maps the header's model name to a model (e.g. a builtin lookup
/// or a check against a user-supplied model). Structural problems throw
/// StateFormatError; the result is not validated.
AnyonicDensityMatrix parse_state(std::string_view text, const std::function<ModelPtr(const std::string &)> &resolve);
AnyonicDensityMatrix load_state(const std::string &path, const std::function<ModelPtr(const std::string &)> &resolve);

std::string format_complex(cplx z);
cplx parse_complex(std::string_view token);

} // namespace anyent
