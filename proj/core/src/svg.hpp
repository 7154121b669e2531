#pragma once

// Minimal SVG builder. Coordinates are printed with fixed precision so the
// same drawing calls always produce the same bytes.

#include <string>
#include <string_view>
#include <vector>

namespace cropyield::svg {

std::string num(double v);
std::string escape(std::string_view text);

struct Point {
  double x;
  double y;
};

class Document {
 public:
  Document(double width, double height, std::string_view title);

  void rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view extra = {});
  void line(double x1, double y1, double x2, double y2, std::string_view stroke = "#333",
            std::string_view extra = {});
  void circle(double cx, double cy, double r, std::string_view fill, std::string_view extra = {});
  void text(double x, double y, std::string_view content, std::string_view extra = {});
  void polyline(const std::vector<Point>& points, std::string_view stroke,
                std::string_view extra = {});
  void raw(std::string_view fragment) { body_ += fragment; }

  std::string str() const;

 private:
  double width_;
  double height_;
  std::string title_;
  std::string body_;
};

/// Linear map from a data interval onto a pixel interval.
struct Scale {
  double d0, d1, p0, p1;
  double operator()(double v) const {
    return d1 == d0 ? (p0 + p1) / 2.0 : p0 + (v - d0) / (d1 - d0) * (p1 - p0);
  }
};

/// Left axis with `ticks` evenly spaced labels over the scale's data range.
void y_axis(Document& doc, const Scale& s, double x, int ticks, std::string_view label);
void x_axis(Document& doc, const Scale& s, double y, int ticks, std::string_view label);

}  // namespace cropyield::svg
