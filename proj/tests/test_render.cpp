#include <doctest.h>

#include <cmath>
#include <regex>

#include "serinarr/render.hpp"

using namespace serinarr;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

PlotSpec sample_spec() {
    PlotSpec spec;
    for (int k = 0; k <= 64; ++k) {
        spec.xs.push_back(k / 64.0);
        spec.ys.push_back(0.5 + 0.4 * std::sin(k / 10.0));
    }
    spec.overlays.push_back({{LineParams{0.2, 0.5}, {0, 0.5}}, "#d62728", "d1"});
    spec.overlays.push_back({{ToothParams{0.4, 0.4, 0.6, 0.7, 0.1}, {0.5, 1}}, "#1f77b4", "d2"});
    spec.zone_errors = {0.0, 0.075, 0.15, 0.3};
    spec.title = "a <b> & c";
    return spec;
}

}  // namespace

TEST_CASE("error bar colors") {
    CHECK(to_hex(error_bar_color(0.0, 0.15)) == "#00ff00");
    CHECK(to_hex(error_bar_color(0.15, 0.15)) == "#ff0000");
    CHECK(to_hex(error_bar_color(1.0, 0.15)) == "#ff0000");
    CHECK(error_bar_color(0.075, 0.15) == Rgb{128, 128, 0});
}

TEST_CASE("heatmap palette") {
    CHECK(to_hex(heatmap_color(0.0, 0.3)) == "#000000");
    CHECK(to_hex(heatmap_color(0.15, 0.3)) == "#ff0000");
    CHECK(to_hex(heatmap_color(0.3, 0.3)) == "#ffff00");
    CHECK(heatmap_color(0.075, 0.3) == Rgb{128, 0, 0});
}

TEST_CASE("enriched chart content") {
    const auto svg = render_enriched(sample_spec());
    CHECK(svg.starts_with("<svg "));
    CHECK(count(svg, "class=\"overlay\"") == 2);
    CHECK(count(svg, "class=\"zone\"") == 4);
    CHECK(count(svg, "#00ff00") == 1);
    CHECK(count(svg, "#ff0000") == 2);
    CHECK(svg.find("a &lt;b&gt; &amp; c") != std::string::npos);

    // each overlay polyline carries at least the minimum number of points
    const std::regex poly(R"re(<g class="overlay"[^>]*>\n<polyline[^>]*points="([^"]*)")re");
    int overlays = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly); it != std::sregex_iterator(); ++it) {
        const std::string pts = (*it)[1];
        CHECK(count(pts, ",") >= static_cast<std::size_t>(kOverlaySamples));
        ++overlays;
    }
    CHECK(overlays == 2);
}

TEST_CASE("rendering is deterministic") {
    CHECK(render_enriched(sample_spec()) == render_enriched(sample_spec()));
    HeatmapSpec h{{{0.1, 0.2}, {0.05, NAN}}, {{0, 1}}, 24, "rmse"};
    CHECK(render_heatmap(h) == render_heatmap(h));
}

TEST_CASE("heatmap cells") {
    HeatmapSpec h{{{0.0, 0.2, 0.4}, {0.1, NAN, 0.3}}, {{1, 2}}, 24, ""};
    const auto svg = render_heatmap(h);
    CHECK(count(svg, "<rect class=\"cell") == 6);
    CHECK(count(svg, "class=\"cell selected\"") == 1);
    CHECK(count(svg, "#00ff00") == 1);
    CHECK(count(svg, "#c8c8c8") == 1);
    CHECK(count(svg, "fill=\"#000000\"") == 1);
    CHECK(count(svg, "fill=\"#ffff00\"") == 1);
}
