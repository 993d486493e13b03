#include "serinarr/error.hpp"

namespace serinarr {

std::string_view stage_name(Stage stage) noexcept {
    switch (stage) {
        case Stage::Config: return "config";
        case Stage::Ingest: return "ingest";
        case Stage::Fit: return "fit";
        case Stage::Solve: return "solve";
        case Stage::Narrate: return "narrate";
        case Stage::Output: return "output";
    }
    return "unknown";
}

Error::Error(Stage stage, std::string message, std::string hint)
    : std::runtime_error(std::move(message)), stage_(stage), hint_(std::move(hint)) {}

}  // namespace serinarr
