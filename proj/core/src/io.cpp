#include "solspec/io.hpp"
#include "solspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace solspec {

std::string fmt12(double x)
{
    char buf[64];
    if (x == 0)
        x = 0; // no "-0"
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_text_file(std::string const & path, std::string const & content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ResourceError("cannot open " + path + " for writing");
    f << content;
    if (!f)
        throw ResourceError("write to " + path + " failed");
}

std::string join_path(std::string const & dir, std::string const & file)
{
    if (dir.empty())
        return file;
    return dir.back() == '/' ? dir + file : dir + "/" + file;
}

SvgPlot::SvgPlot(double xmin, double xmax, double ymin, double ymax, int width, int height)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), w_(width), h_(height)
{
    if (!(xmax > xmin) || !(ymax > ymin))
        throw ValidationError("empty plot range");
}

double SvgPlot::sx(double x) const { return 20 + (x - xmin_) / (xmax_ - xmin_) * (w_ - 40); }
double SvgPlot::sy(double y) const { return h_ - 20 - (y - ymin_) / (ymax_ - ymin_) * (h_ - 40); }

static std::string f3(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", x);
    return buf;
}

void SvgPlot::point(double x, double y, double r, std::string const & color)
{
    items_.push_back("<circle cx=\"" + f3(sx(x)) + "\" cy=\"" + f3(sy(y)) + "\" r=\"" + f3(r)
                     + "\" fill=\"" + color + "\"/>");
}

void SvgPlot::circle(double cx, double cy, double r, std::string const & color)
{
    double rx = r / (xmax_ - xmin_) * (w_ - 40), ry = r / (ymax_ - ymin_) * (h_ - 40);
    items_.push_back("<ellipse cx=\"" + f3(sx(cx)) + "\" cy=\"" + f3(sy(cy)) + "\" rx=\"" + f3(rx)
                     + "\" ry=\"" + f3(ry) + "\" fill=\"none\" stroke=\"" + color + "\"/>");
}

void SvgPlot::bar(double x0, double x1, double height, std::string const & color)
{
    double X0 = sx(x0), X1 = sx(x1), Y0 = sy(0), Y1 = sy(height);
    items_.push_back("<rect x=\"" + f3(X0) + "\" y=\"" + f3(std::min(Y0, Y1)) + "\" width=\""
                     + f3(X1 - X0) + "\" height=\"" + f3(std::abs(Y1 - Y0)) + "\" fill=\"" + color + "\"/>");
}

void SvgPlot::line(double x0, double y0, double x1, double y1, std::string const & color)
{
    items_.push_back("<line x1=\"" + f3(sx(x0)) + "\" y1=\"" + f3(sy(y0)) + "\" x2=\"" + f3(sx(x1))
                     + "\" y2=\"" + f3(sy(y1)) + "\" stroke=\"" + color + "\"/>");
}

void SvgPlot::title(std::string const & text)
{
    title_ = text;
}

std::string SvgPlot::str() const
{
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w_)
                    + "\" height=\"" + std::to_string(h_) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title_.empty())
        s += "<text x=\"20\" y=\"14\" font-size=\"12\" font-family=\"sans-serif\">" + title_ + "</text>\n";
    for (auto const & it : items_)
        s += it + "\n";
    s += "</svg>\n";
    return s;
}

} // namespace solspec
