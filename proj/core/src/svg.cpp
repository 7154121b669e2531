#include "svg.hpp"

#include <cmath>
#include <cstdio>

namespace cropyield::svg {

std::string num(double v) {
  if (!std::isfinite(v)) return "0";
  if (std::abs(v) < 5e-3) v = 0.0;  // avoid "-0.00"
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

namespace {
std::string with_extra(std::string_view extra) {
  return extra.empty() ? std::string() : " " + std::string(extra);
}
}  // namespace

Document::Document(double width, double height, std::string_view title)
    : width_(width), height_(height), title_(title) {}

void Document::rect(double x, double y, double w, double h, std::string_view fill,
                    std::string_view extra) {
  body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(std::max(w, 0.0)) +
           "\" height=\"" + num(std::max(h, 0.0)) + "\" fill=\"" + std::string(fill) + "\"" +
           with_extra(extra) + "/>\n";
}

void Document::line(double x1, double y1, double x2, double y2, std::string_view stroke,
                    std::string_view extra) {
  body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
           num(y2) + "\" stroke=\"" + std::string(stroke) + "\"" + with_extra(extra) + "/>\n";
}

void Document::circle(double cx, double cy, double r, std::string_view fill, std::string_view extra) {
  body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" +
           std::string(fill) + "\"" + with_extra(extra) + "/>\n";
}

void Document::text(double x, double y, std::string_view content, std::string_view extra) {
  body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\"" + with_extra(extra) + ">" +
           escape(content) + "</text>\n";
}

void Document::polyline(const std::vector<Point>& points, std::string_view stroke,
                        std::string_view extra) {
  body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) + "\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) body_.push_back(' ');
    body_ += num(points[i].x) + "," + num(points[i].y);
  }
  body_ += "\"" + with_extra(extra) + "/>\n";
}

std::string Document::str() const {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" +
         num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<title>" + escape(title_) + "</title>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(width_) + "\" height=\"" + num(height_) +
         "\" fill=\"#ffffff\"/>\n";
  out += body_;
  out += "</svg>\n";
  return out;
}

namespace {
std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}
}  // namespace

void y_axis(Document& doc, const Scale& s, double x, int ticks, std::string_view label) {
  doc.line(x, s.p0, x, s.p1);
  for (int i = 0; i <= ticks; ++i) {
    const double v = s.d0 + (s.d1 - s.d0) * i / ticks;
    const double y = s(v);
    doc.line(x - 4, y, x, y);
    doc.text(x - 6, y + 4, tick_label(v), "text-anchor=\"end\" class=\"tick\"");
  }
  const double mid = (s.p0 + s.p1) / 2.0;
  doc.text(x - 48, mid, label,
           "text-anchor=\"middle\" class=\"axis-label\" transform=\"rotate(-90 " + num(x - 48) +
               " " + num(mid) + ")\"");
}

void x_axis(Document& doc, const Scale& s, double y, int ticks, std::string_view label) {
  doc.line(s.p0, y, s.p1, y);
  for (int i = 0; i <= ticks; ++i) {
    const double v = s.d0 + (s.d1 - s.d0) * i / ticks;
    const double x = s(v);
    doc.line(x, y, x, y + 4);
    doc.text(x, y + 16, tick_label(v), "text-anchor=\"middle\" class=\"tick\"");
  }
  doc.text((s.p0 + s.p1) / 2.0, y + 32, label, "text-anchor=\"middle\" class=\"axis-label\"");
}

}  // namespace cropyield::svg
