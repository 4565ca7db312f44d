#pragma once

#include <Eigen/Dense>

#include <sstream>
#include <string>
#include <vector>

namespace semitoric {

/// Minimal SVG writer mapping a data rectangle onto a pixel canvas (y up).
/// Coordinates are written with four decimals so that output is reproducible.
class SvgCanvas {
 public:
  SvgCanvas(double width, double height, Eigen::Vector2d data_min, Eigen::Vector2d data_max, double margin = 20.0);

  void rect(Eigen::Vector2d lo, Eigen::Vector2d hi, const std::string& fill);
  void polygon(const std::vector<Eigen::Vector2d>& pts, const std::string& fill, const std::string& stroke);
  void polyline(const std::vector<Eigen::Vector2d>& pts, const std::string& stroke, bool dashed = false);
  void line(Eigen::Vector2d a, Eigen::Vector2d b, const std::string& stroke, bool dashed = false);
  void dot(Eigen::Vector2d p, double radius, const std::string& fill);
  void text(Eigen::Vector2d p, const std::string& s, double size = 10.0);

  std::string str() const;

 private:
  Eigen::Vector2d map(Eigen::Vector2d p) const;
  static std::string num(double v);

  double width_, height_, margin_;
  Eigen::Vector2d lo_, hi_;
  std::ostringstream body_;
};

}  // namespace semitoric
