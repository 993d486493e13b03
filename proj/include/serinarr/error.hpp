#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace serinarr {

/// Pipeline stage that raised an error. The CLI maps each stage to its own
/// exit code.
enum class Stage {
    Config,
    Ingest,
    Fit,
    Solve,
    Narrate,
    Output,
};

std::string_view stage_name(Stage stage) noexcept;

class Error : public std::runtime_error {
public:
    Error(Stage stage, std::string message, std::string hint = {});

    Stage stage() const noexcept { return stage_; }
    const std::string& hint() const noexcept { return hint_; }

private:
    Stage stage_;
    std::string hint_;
};

}  // namespace serinarr
