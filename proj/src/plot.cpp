#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ghl/harness.hpp"
#include "ghl/serialize.hpp"

namespace ghl {

namespace {

struct Curve {
    std::vector<double> lambda, value;
    double v0 = 0.0, vbar = 0.0, vbar_half_sigma = 0.0;
};

Curve parse_curve_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Curve curve;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("lambda,", 0) != 0) {
                throw MalformedCsv("curve header must start with lambda");
            }
            header_seen = true;
            continue;
        }
        std::vector<double> fields;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            try {
                fields.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw MalformedCsv("non-numeric cell: " + cell);
            }
        }
        if (fields.size() < 5) throw MalformedCsv("curve row needs at least 5 columns");
        curve.lambda.push_back(fields[0]);
        curve.value.push_back(fields[1]);
        curve.v0 = fields[2];
        curve.vbar = fields[3];
        curve.vbar_half_sigma = fields[4];
    }
    if (curve.lambda.empty()) throw MalformedCsv("curve file has no data rows");
    return curve;
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

void emit_plot(const std::string& csv_path, const std::string& svg_path) {
    Curve curve = parse_curve_csv(read_text_file(csv_path));

    const double width = 640, height = 420;
    const double ml = 70, mr = 20, mt = 20, mb = 50;

    double min_pos = 1e300;
    for (double l : curve.lambda) {
        if (l > 0.0) min_pos = std::min(min_pos, l);
    }
    if (min_pos == 1e300) min_pos = 1.0;
    auto log_l = [&](double l) { return std::log10(std::max(l, min_pos / 10.0)); };
    double x_lo = log_l(0.0), x_hi = log_l(curve.lambda.back());
    for (double l : curve.lambda) x_hi = std::max(x_hi, log_l(l));
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;

    double y_lo = std::min({curve.vbar, curve.v0, curve.vbar_half_sigma});
    double y_hi = std::max({curve.vbar, curve.v0, curve.vbar_half_sigma});
    for (double v : curve.value) {
        y_lo = std::min(y_lo, v);
        y_hi = std::max(y_hi, v);
    }
    double pad = std::max(0.05, (y_hi - y_lo) * 0.1);
    y_lo -= pad;
    y_hi += pad;

    auto px = [&](double l) {
        return ml + (log_l(l) - x_lo) / (x_hi - x_lo) * (width - ml - mr);
    };
    auto py = [&](double v) {
        return height - mb - (v - y_lo) / (y_hi - y_lo) * (height - mt - mb);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << coord(ml) << "\" y1=\"" << coord(height - mb) << "\" x2=\""
        << coord(width - mr) << "\" y2=\"" << coord(height - mb)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << coord(ml) << "\" y1=\"" << coord(mt) << "\" x2=\""
        << coord(ml) << "\" y2=\"" << coord(height - mb) << "\" stroke=\"black\"/>\n";

    struct Ref {
        double v;
        const char* color;
        const char* label;
    };
    for (const Ref& ref : {Ref{curve.v0, "#2a9d2a", "contemporary"},
                           Ref{curve.vbar, "#3a6fd8", "primordial"},
                           Ref{curve.vbar_half_sigma, "#d84a3a", "safety floor"}}) {
        svg << "<line x1=\"" << coord(ml) << "\" y1=\"" << coord(py(ref.v)) << "\" x2=\""
            << coord(width - mr) << "\" y2=\"" << coord(py(ref.v)) << "\" stroke=\""
            << ref.color << "\" stroke-dasharray=\"6,4\"/>\n";
        svg << "<text x=\"" << coord(width - mr - 4) << "\" y=\""
            << coord(py(ref.v) - 4) << "\" text-anchor=\"end\" font-size=\"11\" fill=\""
            << ref.color << "\">" << ref.label << "</text>\n";
    }

    svg << "<polyline fill=\"none\" stroke=\"#222222\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < curve.lambda.size(); ++i) {
        if (i) svg << " ";
        svg << coord(px(curve.lambda[i])) << "," << coord(py(curve.value[i]));
    }
    svg << "\"/>\n";

    svg << "<text x=\"" << coord((ml + width - mr) / 2) << "\" y=\""
        << coord(height - 12)
        << "\" text-anchor=\"middle\" font-size=\"13\">optimization pressure (log scale)"
        << "</text>\n";
    svg << "<text x=\"16\" y=\"" << coord((mt + height - mb) / 2)
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << coord((mt + height - mb) / 2) << ")\">value</text>\n";
    svg << "</svg>\n";
    write_text_file(svg_path, svg.str());
}

}  // namespace ghl
