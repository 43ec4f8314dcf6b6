#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oicf::svg {

// Fixed-format number rendering shared by every emitted chart.
std::string coord(double v);   // two decimals, for geometry
std::string label(double v);   // six significant digits, for text

std::string escape(const std::string& text);

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;
    std::string title;
};

// A single chart panel: numeric x axis (lines, points, reference lines, bands) or
// categorical x axis (grouped and stacked bars). Rendered into a translated <g>.
class Plot {
 public:
    Plot(std::string title, Axis x, Axis y);
    static Plot categorical(std::string title, std::vector<std::string> categories, Axis y);

    void add_line(std::vector<std::pair<double, double>> points, std::string color, std::string name,
                  bool dashed = false);
    void add_point(double x, double y, std::string color, std::string tooltip);
    void add_hline(double y, std::string color, std::string name);
    void add_vline(double x, std::string color, std::string name);
    // Horizontal band from y0 to y1 across the whole x range.
    void add_band(double y0, double y1, std::string color, std::string name);
    // One bar per category at the given slot within the category group; `base`
    // stacks the bars on top of earlier ones.
    void add_bars(std::vector<double> values, std::string color, std::string name, int slot = 0,
                  std::vector<double> base = {}, double opacity = 1.0);
    void add_legend_entry(std::string color, std::string name);

    std::string render(double x, double y, double width, double height) const;

 private:
    struct Line {
        std::vector<std::pair<double, double>> points;
        std::string color, name;
        bool dashed;
    };
    struct Marker {
        double x, y;
        std::string color, tooltip;
    };
    struct Rule {
        double at;
        bool horizontal;
        std::string color, name;
    };
    struct Band {
        double y0, y1;
        std::string color, name;
    };
    struct Bars {
        std::vector<double> values, base;
        std::string color, name;
        int slot;
        double opacity;
    };

    std::string title_;
    Axis x_, y_;
    std::vector<std::string> categories_;
    std::vector<Line> lines_;
    std::vector<Marker> markers_;
    std::vector<Rule> rules_;
    std::vector<Band> bands_;
    std::vector<Bars> bars_;
    std::vector<std::pair<std::string, std::string>> legend_;
};

class Document {
 public:
    Document(double width, double height, std::string title = {});
    void add(const Plot& plot, double x, double y, double width, double height);
    std::string render() const;

 private:
    double width_, height_;
    std::string title_;
    std::string body_;
};

}  // namespace oicf::svg
