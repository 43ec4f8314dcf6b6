#include "oicf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace oicf::svg {

namespace {

constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 28.0;
constexpr double kMarginBottom = 56.0;

double clamp_positive(double v) { return v > 0.0 ? v : 1e-300; }

struct Mapper {
    Axis axis;
    double px_lo, px_hi;

    double operator()(double v) const {
        double t;
        if (axis.log) {
            const double lo = std::log10(clamp_positive(axis.lo));
            const double hi = std::log10(clamp_positive(axis.hi));
            t = (std::log10(clamp_positive(v)) - lo) / (hi - lo);
        } else {
            t = (v - axis.lo) / (axis.hi - axis.lo);
        }
        t = std::clamp(t, -0.02, 1.02);
        return px_lo + t * (px_hi - px_lo);
    }
};

std::vector<double> ticks(const Axis& a) {
    std::vector<double> out;
    if (a.log) {
        const int lo = static_cast<int>(std::ceil(std::log10(clamp_positive(a.lo)) - 1e-9));
        const int hi = static_cast<int>(std::floor(std::log10(clamp_positive(a.hi)) + 1e-9));
        const int step = std::max(1, (hi - lo) / 8 + 1);
        for (int e = lo; e <= hi; e += step) out.push_back(std::pow(10.0, e));
        return out;
    }
    const double span = a.hi - a.lo;
    if (!(span > 0)) return {a.lo};
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    for (double v = std::ceil(a.lo / step) * step; v <= a.hi + step * 1e-9; v += step)
        out.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    return out;
}

}  // namespace

std::string coord(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
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

Plot::Plot(std::string title, Axis x, Axis y) : title_(std::move(title)), x_(std::move(x)), y_(std::move(y)) {
    if (!(x_.hi > x_.lo) || !(y_.hi > y_.lo)) throw std::invalid_argument("plot axis range is empty");
    if ((x_.log && !(x_.lo > 0)) || (y_.log && !(y_.lo > 0)))
        throw std::invalid_argument("log axis needs a positive lower bound");
}

Plot Plot::categorical(std::string title, std::vector<std::string> categories, Axis y) {
    Plot p(std::move(title), Axis{0.0, static_cast<double>(std::max<std::size_t>(categories.size(), 1)), false, {}},
           std::move(y));
    p.categories_ = std::move(categories);
    return p;
}

void Plot::add_line(std::vector<std::pair<double, double>> points, std::string color, std::string name,
                    bool dashed) {
    legend_.emplace_back(color, name);
    lines_.push_back({std::move(points), std::move(color), std::move(name), dashed});
}

void Plot::add_point(double x, double y, std::string color, std::string tooltip) {
    markers_.push_back({x, y, std::move(color), std::move(tooltip)});
}

void Plot::add_hline(double y, std::string color, std::string name) {
    legend_.emplace_back(color, name);
    rules_.push_back({y, true, std::move(color), std::move(name)});
}

void Plot::add_vline(double x, std::string color, std::string name) {
    legend_.emplace_back(color, name);
    rules_.push_back({x, false, std::move(color), std::move(name)});
}

void Plot::add_band(double y0, double y1, std::string color, std::string name) {
    legend_.emplace_back(color, name);
    bands_.push_back({y0, y1, std::move(color), std::move(name)});
}

void Plot::add_bars(std::vector<double> values, std::string color, std::string name, int slot,
                    std::vector<double> base, double opacity) {
    if (values.size() != categories_.size()) throw std::invalid_argument("bar count must match categories");
    if (!base.empty() && base.size() != values.size()) throw std::invalid_argument("bar base size mismatch");
    legend_.emplace_back(color, name);
    bars_.push_back({std::move(values), std::move(base), std::move(color), std::move(name), slot, opacity});
}

void Plot::add_legend_entry(std::string color, std::string name) { legend_.emplace_back(std::move(color), std::move(name)); }

std::string Plot::render(double ox, double oy, double width, double height) const {
    const double left = kMarginLeft, right = width - kMarginRight;
    const double top = kMarginTop, bottom = height - kMarginBottom;
    const Mapper mx{x_, left, right};
    const Mapper my{y_, bottom, top};

    std::ostringstream s;
    s << "<g transform=\"translate(" << coord(ox) << "," << coord(oy) << ")\">\n";
    s << "<text x=\"" << coord(width / 2) << "\" y=\"18.00\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title_) << "</text>\n";

    for (const auto& b : bands_) {
        const double y0 = my(b.y0), y1 = my(b.y1);
        s << "<rect x=\"" << coord(left) << "\" y=\"" << coord(std::min(y0, y1)) << "\" width=\""
          << coord(right - left) << "\" height=\"" << coord(std::abs(y0 - y1)) << "\" fill=\"" << b.color
          << "\" fill-opacity=\"0.25\"><title>" << escape(b.name) << "</title></rect>\n";
    }

    // gridlines and tick labels
    for (double t : ticks(y_)) {
        const double py = my(t);
        s << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(py) << "\" x2=\"" << coord(right) << "\" y2=\""
          << coord(py) << "\" stroke=\"#dddddd\"/>\n";
        s << "<text x=\"" << coord(left - 6) << "\" y=\"" << coord(py + 4)
          << "\" text-anchor=\"end\" font-size=\"10\">" << label(t) << "</text>\n";
    }
    if (categories_.empty()) {
        for (double t : ticks(x_)) {
            const double px = mx(t);
            s << "<line x1=\"" << coord(px) << "\" y1=\"" << coord(top) << "\" x2=\"" << coord(px) << "\" y2=\""
              << coord(bottom) << "\" stroke=\"#dddddd\"/>\n";
            s << "<text x=\"" << coord(px) << "\" y=\"" << coord(bottom + 14)
              << "\" text-anchor=\"middle\" font-size=\"10\">" << label(t) << "</text>\n";
        }
    } else {
        for (std::size_t i = 0; i < categories_.size(); ++i) {
            const double px = mx(static_cast<double>(i) + 0.5);
            s << "<text x=\"" << coord(px) << "\" y=\"" << coord(bottom + 14)
              << "\" text-anchor=\"middle\" font-size=\"10\">" << escape(categories_[i]) << "</text>\n";
        }
    }
    s << "<rect x=\"" << coord(left) << "\" y=\"" << coord(top) << "\" width=\"" << coord(right - left)
      << "\" height=\"" << coord(bottom - top) << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    s << "<text x=\"" << coord((left + right) / 2) << "\" y=\"" << coord(height - 24)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << escape(x_.title) << "</text>\n";
    s << "<text x=\"14.00\" y=\"" << coord((top + bottom) / 2) << "\" text-anchor=\"middle\" font-size=\"11\" "
      << "transform=\"rotate(-90 14.00 " << coord((top + bottom) / 2) << ")\">" << escape(y_.title) << "</text>\n";

    if (!bars_.empty()) {
        int slots = 1;
        for (const auto& b : bars_) slots = std::max(slots, b.slot + 1);
        const double group = (right - left) / static_cast<double>(categories_.size());
        const double bar_w = group * 0.8 / slots;
        for (const auto& b : bars_) {
            for (std::size_t i = 0; i < b.values.size(); ++i) {
                const double lo = b.base.empty() ? (y_.log ? y_.lo : std::max(0.0, y_.lo)) : b.base[i];
                const double hi = lo + b.values[i];
                const double x0 = left + group * static_cast<double>(i) + group * 0.1 + bar_w * b.slot;
                const double y_top = my(hi), y_bot = my(lo);
                s << "<rect x=\"" << coord(x0) << "\" y=\"" << coord(y_top) << "\" width=\"" << coord(bar_w)
                  << "\" height=\"" << coord(std::max(0.0, y_bot - y_top)) << "\" fill=\"" << b.color << "\"";
                if (b.opacity < 1.0) s << " fill-opacity=\"" << coord(b.opacity) << "\"";
                s << "><title>" << escape(b.name + " " + categories_[i]) << ": " << label(b.values[i])
                  << "</title></rect>\n";
            }
        }
    }

    for (const auto& r : rules_) {
        if (r.horizontal) {
            const double py = my(r.at);
            s << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(py) << "\" x2=\"" << coord(right)
              << "\" y2=\"" << coord(py) << "\" stroke=\"" << r.color << "\" stroke-dasharray=\"6 3\"/>\n";
        } else {
            const double px = mx(r.at);
            s << "<line x1=\"" << coord(px) << "\" y1=\"" << coord(top) << "\" x2=\"" << coord(px)
              << "\" y2=\"" << coord(bottom) << "\" stroke=\"" << r.color << "\" stroke-dasharray=\"6 3\"/>\n";
        }
    }

    for (const auto& l : lines_) {
        s << "<polyline fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\"2\"";
        if (l.dashed) s << " stroke-dasharray=\"4 2\"";
        s << " points=\"";
        for (std::size_t i = 0; i < l.points.size(); ++i) {
            if (i) s << ' ';
            s << coord(mx(l.points[i].first)) << ',' << coord(my(l.points[i].second));
        }
        s << "\"><title>" << escape(l.name) << "</title></polyline>\n";
    }

    for (const auto& m : markers_) {
        s << "<circle cx=\"" << coord(mx(m.x)) << "\" cy=\"" << coord(my(m.y)) << "\" r=\"4.00\" fill=\"" << m.color
          << "\" stroke=\"#222222\" stroke-width=\"0.5\"><title>" << escape(m.tooltip) << "</title></circle>\n";
    }

    // legend, deduplicated, top-left inside the frame
    std::vector<std::pair<std::string, std::string>> seen;
    double ly = top + 14;
    for (const auto& entry : legend_) {
        if (entry.second.empty() || std::find(seen.begin(), seen.end(), entry) != seen.end()) continue;
        seen.push_back(entry);
        s << "<rect x=\"" << coord(left + 8) << "\" y=\"" << coord(ly - 8) << "\" width=\"10.00\" height=\"10.00\" fill=\""
          << entry.first << "\"/>\n";
        s << "<text x=\"" << coord(left + 22) << "\" y=\"" << coord(ly + 1) << "\" font-size=\"10\">"
          << escape(entry.second) << "</text>\n";
        ly += 14;
    }
    s << "</g>\n";
    return s.str();
}

Document::Document(double width, double height, std::string title)
    : width_(width), height_(height), title_(std::move(title)) {}

void Document::add(const Plot& plot, double x, double y, double width, double height) {
    body_ += plot.render(x, y, width, height);
}

std::string Document::render() const {
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << coord(width_) << "\" height=\"" << coord(height_)
      << "\" viewBox=\"0 0 " << coord(width_) << ' ' << coord(height_) << "\" font-family=\"sans-serif\">\n";
    if (!title_.empty()) s << "<title>" << escape(title_) << "</title>\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n" << body_ << "</svg>\n";
    return s.str();
}

}  // namespace oicf::svg
