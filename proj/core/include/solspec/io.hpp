#pragma once

#include <string>
#include <vector>

namespace solspec {

/* fixed 12-significant-digit formatting used by every emitter */
std::string fmt12(double x);

void write_text_file(std::string const & path, std::string const & content);
std::string join_path(std::string const & dir, std::string const & file);

/* minimal SVG: scatter points, circles and bars in data coordinates */
class SvgPlot {
  public:
    SvgPlot(double xmin, double xmax, double ymin, double ymax, int width = 640, int height = 640);
    void point(double x, double y, double r = 1.5, std::string const & color = "#1f4e9c");
    void circle(double cx, double cy, double r, std::string const & color = "#c03020");
    void bar(double x0, double x1, double height, std::string const & color = "#1f4e9c");
    void line(double x0, double y0, double x1, double y1, std::string const & color = "#888888");
    void title(std::string const & text);
    std::string str() const;
  private:
    double sx(double x) const;
    double sy(double y) const;
    double xmin_, xmax_, ymin_, ymax_;
    int w_, h_;
    std::vector<std::string> items_;
    std::string title_;
};

} // namespace solspec
