#pragma once

#include <iosfwd>

namespace anyent::cli {

/// Exit codes shared by every subcommand.
enum Exit : int {
    ok = 0,
    verify_failed = 1,
    model_error = 2,
    invalid_state = 3,
    closed_form_unavailable = 4,
};

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace anyent::cli
