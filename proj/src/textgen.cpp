#include "serinarr/textgen.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace serinarr {

namespace {

// Connective in front of clause k of `count`.
std::string_view connective(std::size_t k, std::size_t count) {
    if (k == 0) return "";
    if (k + 1 == count) return "and finally by ";
    if (k == 1) return "followed by ";
    if (k == 2) return "then by ";
    return "";
}

std::string join_clauses(const std::vector<std::string>& clauses) {
    std::string out;
    for (std::size_t k = 0; k < clauses.size(); ++k) {
        if (k > 0) out += "; ";
        out += clauses[k];
    }
    return out;
}

std::string_view article(std::string_view word) {
    return !word.empty() && std::string_view("aeiou").find(word.front()) != std::string_view::npos
               ? "an"
               : "a";
}

}  // namespace

std::string format_number(double value) {
    double rounded = std::round(value * 100.0) / 100.0;
    if (rounded == 0.0) rounded = 0.0;  // no "-0.0"
    auto text = fmt::format("{:.2f}", rounded);
    if (text.size() >= 2 && text.back() == '0' && text[text.size() - 2] != '.') text.pop_back();
    return text;
}

std::string display_token(std::string_view token) {
    std::string out(token);
    std::replace(out.begin(), out.end(), '_', ' ');
    return out;
}

std::string realize_unit(const NarrationUnit& unit, bool occurs) {
    const auto& s = unit.shape;
    const auto& a = s.anchors;
    const auto adjective = display_token(s.strength);
    const auto head = fmt::format("{} {} {}", article(adjective), adjective, s.noun);
    if (s.extent == Extent::PointLike) {
        return fmt::format("{} reaching a value of {} {}at {}", head, format_number(a.value),
                           occurs ? "occurs " : "", format_number(a.x));
    }
    const auto scope = a.context_whole ? std::string("among the whole dataset")
                                       : fmt::format("between {} and {}",
                                                     format_number(a.context_lo),
                                                     format_number(a.context_hi));
    return fmt::format("{} reaching an average of {} between {} and {} out of a general average of {} {}",
                       head, format_number(a.value), format_number(a.x1), format_number(a.x2),
                       format_number(a.context_avg), scope);
}

NarrationText realize(const std::vector<NarrationUnit>& units) {
    std::vector<const NarrationUnit*> summary;
    std::vector<const NarrationUnit*> details;
    for (const auto& u : units) (u.role == Role::Summary ? summary : details).push_back(&u);

    NarrationText text;
    std::vector<std::string> summary_clauses;
    for (std::size_t k = 0; k < summary.size(); ++k) {
        summary_clauses.push_back(std::string(connective(k, summary.size())) +
                                  realize_unit(*summary[k]));
    }
    text.summary_sentence = "In general, the series presents " + join_clauses(summary_clauses) + ".";

    for (std::size_t k = 0; k < details.size(); ++k) {
        text.detail_clauses.push_back(std::string(connective(k, details.size())) +
                                      realize_unit(*details[k], k == 0));
    }
    text.full_text = text.summary_sentence;
    if (!details.empty()) {
        text.full_text += " In detail, " + join_clauses(text.detail_clauses) + ".";
    }
    return text;
}

}  // namespace serinarr
