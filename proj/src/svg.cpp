#include "semitoric/svg.hpp"

#include <cmath>
#include <cstdio>

namespace semitoric {

SvgCanvas::SvgCanvas(double width, double height, Eigen::Vector2d data_min, Eigen::Vector2d data_max, double margin)
    : width_(width), height_(height), margin_(margin), lo_(data_min), hi_(data_max) {
  for (int k = 0; k < 2; ++k)
    if (!(hi_[k] > lo_[k])) hi_[k] = lo_[k] + 1.0;
}

std::string SvgCanvas::num(double v) {
  if (std::abs(v) < 5e-5) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

Eigen::Vector2d SvgCanvas::map(Eigen::Vector2d p) const {
  const double sx = (width_ - 2 * margin_) / (hi_.x() - lo_.x());
  const double sy = (height_ - 2 * margin_) / (hi_.y() - lo_.y());
  return {margin_ + (p.x() - lo_.x()) * sx, height_ - margin_ - (p.y() - lo_.y()) * sy};
}

void SvgCanvas::rect(Eigen::Vector2d lo, Eigen::Vector2d hi, const std::string& fill) {
  const Eigen::Vector2d a = map({lo.x(), hi.y()});
  const Eigen::Vector2d b = map({hi.x(), lo.y()});
  body_ << "<rect x=\"" << num(a.x()) << "\" y=\"" << num(a.y()) << "\" width=\"" << num(b.x() - a.x())
        << "\" height=\"" << num(b.y() - a.y()) << "\" fill=\"" << fill << "\"/>\n";
}

void SvgCanvas::polygon(const std::vector<Eigen::Vector2d>& pts, const std::string& fill, const std::string& stroke) {
  body_ << "<polygon points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Eigen::Vector2d q = map(pts[i]);
    body_ << (i ? " " : "") << num(q.x()) << "," << num(q.y());
  }
  body_ << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
}

void SvgCanvas::polyline(const std::vector<Eigen::Vector2d>& pts, const std::string& stroke, bool dashed) {
  body_ << "<polyline points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Eigen::Vector2d q = map(pts[i]);
    body_ << (i ? " " : "") << num(q.x()) << "," << num(q.y());
  }
  body_ << "\" fill=\"none\" stroke=\"" << stroke << "\"" << (dashed ? " stroke-dasharray=\"4 3\"" : "") << "/>\n";
}

void SvgCanvas::line(Eigen::Vector2d a, Eigen::Vector2d b, const std::string& stroke, bool dashed) {
  polyline({a, b}, stroke, dashed);
}

void SvgCanvas::dot(Eigen::Vector2d p, double radius, const std::string& fill) {
  const Eigen::Vector2d q = map(p);
  body_ << "<circle cx=\"" << num(q.x()) << "\" cy=\"" << num(q.y()) << "\" r=\"" << num(radius) << "\" fill=\""
        << fill << "\"/>\n";
}

void SvgCanvas::text(Eigen::Vector2d p, const std::string& s, double size) {
  const Eigen::Vector2d q = map(p);
  body_ << "<text x=\"" << num(q.x()) << "\" y=\"" << num(q.y()) << "\" font-size=\"" << num(size) << "\">" << s
        << "</text>\n";
}

std::string SvgCanvas::str() const {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\"" << num(height_)
      << "\" viewBox=\"0 0 " << num(width_) << " " << num(height_) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

}  // namespace semitoric
