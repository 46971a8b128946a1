#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "aoristic/errors.hpp"
#include "aoristic/pipeline.hpp"

namespace aoristic {

namespace detail {

// fixed two-decimal coordinates keep the SVG byte-stable
inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

// One chart per context: posterior mean as a step line across intervals, the
// credible band behind it, and the raw evidence rate overlaid as a dashed
// step line.
inline std::string render_context_svg(const std::string& context_id,
                                      std::span<const ResultRow> rows) {
    if (rows.empty())
        throw validation_error("cannot plot an empty row set");

    const double width = 800.0, height = 400.0;
    const double ml = 60.0, mr = 20.0, mt = 40.0, mb = 40.0;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;

    double y_max = 0.0;
    for (const auto& r : rows)
        y_max = std::max({y_max, r.ci_high, r.evidence_rate, r.posterior_mean});
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.05;

    const std::size_t n = rows.size();
    auto x_of = [&](std::size_t j) { return ml + plot_w * static_cast<double>(j) /
                                            static_cast<double>(n); };
    auto y_of = [&](double v) { return mt + plot_h * (1.0 - v / y_max); };

    auto step_path = [&](auto value_of) {
        std::string d;
        for (std::size_t j = 0; j < n; ++j) {
            const double y = y_of(value_of(rows[j]));
            d += (j == 0 ? "M" : "L") + detail::svg_num(x_of(j)) + " " + detail::svg_num(y);
            d += "L" + detail::svg_num(x_of(j + 1)) + " " + detail::svg_num(y);
        }
        return d;
    };

    // credible band: step outline along ci_high, back along ci_low
    std::string band = "M";
    for (std::size_t j = 0; j < n; ++j) {
        const double y = y_of(rows[j].ci_high);
        if (j > 0) band += "L";
        band += detail::svg_num(x_of(j)) + " " + detail::svg_num(y);
        band += "L" + detail::svg_num(x_of(j + 1)) + " " + detail::svg_num(y);
    }
    for (std::size_t k = n; k-- > 0;) {
        const double y = y_of(rows[k].ci_low);
        band += "L" + detail::svg_num(x_of(k + 1)) + " " + detail::svg_num(y);
        band += "L" + detail::svg_num(x_of(k)) + " " + detail::svg_num(y);
    }
    band += "Z";

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           detail::svg_num(width) + "\" height=\"" + detail::svg_num(height) + "\">\n";
    svg += "<title>" + detail::svg_escape(context_id) + "</title>\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + detail::svg_num(width) + "\" height=\"" +
           detail::svg_num(height) + "\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + detail::svg_num(ml) + "\" y=\"24\" font-family=\"sans-serif\" "
           "font-size=\"16\">" +
           detail::svg_escape(context_id) + "</text>\n";
    svg += "<path class=\"band\" d=\"" + band + "\" fill=\"#c6dbef\" stroke=\"none\"/>\n";
    svg += "<path class=\"mean\" d=\"" + step_path([](const ResultRow& r) {
               return r.posterior_mean;
           }) + "\" fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\"/>\n";
    svg += "<path class=\"evidence\" d=\"" + step_path([](const ResultRow& r) {
               return r.evidence_rate;
           }) + "\" fill=\"none\" stroke=\"#e6550d\" stroke-width=\"1.5\" "
               "stroke-dasharray=\"6 3\"/>\n";

    // x-axis interval labels
    svg += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(mt + plot_h) +
           "\" x2=\"" + detail::svg_num(ml + plot_w) + "\" y2=\"" +
           detail::svg_num(mt + plot_h) + "\" stroke=\"#000000\"/>\n";
    for (std::size_t j = 0; j < n; ++j) {
        const double cx = 0.5 * (x_of(j) + x_of(j + 1));
        svg += "<text x=\"" + detail::svg_num(cx) + "\" y=\"" +
               detail::svg_num(mt + plot_h + 18.0) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
               detail::svg_escape(rows[j].interval_label) + "</text>\n";
    }
    // y-axis extent labels
    svg += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(mt) +
           "\" x2=\"" + detail::svg_num(ml) + "\" y2=\"" + detail::svg_num(mt + plot_h) +
           "\" stroke=\"#000000\"/>\n";
    svg += "<text x=\"" + detail::svg_num(ml - 6.0) + "\" y=\"" + detail::svg_num(mt + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
           detail::svg_num(y_max) + "</text>\n";
    svg += "<text x=\"" + detail::svg_num(ml - 6.0) + "\" y=\"" +
           detail::svg_num(mt + plot_h + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">0</text>\n";
    svg += "</svg>\n";
    return svg;
}

// Writes <destination_dir>/<context_id>.svg for every context present in rows.
inline void emit_plot(std::span<const ResultRow> rows, const std::string& destination_dir) {
    if (rows.empty())
        throw validation_error("cannot plot an empty result set");
    std::map<std::string, std::vector<ResultRow>> by_context;
    for (const auto& r : rows) by_context[r.context_id].push_back(r);
    for (const auto& [id, context_rows] : by_context) {
        const std::string body = render_context_svg(id, context_rows);
        const std::string path = destination_dir + "/" + id + ".svg";
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw io_error("cannot open '" + path + "' for writing");
        out << body;
        if (!out)
            throw io_error("failed writing plot to '" + path + "'");
    }
}

} // namespace aoristic
