#include "srgrobust/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace srg::plot {

namespace {

constexpr double kW = 640, kH = 520;

std::string f3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string header(const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f3(kW) + "\" height=\"" + f3(kH) +
                  "\" viewBox=\"0 0 " + f3(kW) + " " + f3(kH) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + f3(kW / 2) + "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
       title + "</text>\n";
  return s;
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const std::string& colour, double width) {
  std::string s = "<polyline fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"" + f3(width) + "\" points=\"";
  for (const auto& [x, y] : pts) s += f3(x) + "," + f3(y) + " ";
  return s + "\"/>\n";
}

std::string hue(double t) {
  // theta in [-pi, pi) mapped onto a blue-to-orange ramp.
  const double u = std::clamp((t + kPi) / (2 * kPi), 0.0, 1.0);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", int(40 + 200 * u), int(90 + 60 * std::sin(kPi * u)),
                int(220 - 180 * u));
  return buf;
}

}  // namespace

std::string profile_svg(const profile::ThetaProfile& p, const std::string& title) {
  double gmax = 0.0;
  for (const auto& s : p.slices)
    for (double g : s.gamma)
      if (std::isfinite(g)) gmax = std::max(gmax, g);
  if (gmax <= 0.0) gmax = 1.0;
  const double gtop = 1.1 * gmax;
  // Oblique projection: the (x, y) = phi e^{i theta} plane is squashed vertically, gamma goes up.
  const double cx = kW / 2, cy = kH - 150, sx = 70, sy = 28, sz = (kH - 230) / gtop;
  auto proj = [&](double theta, double phi, double gamma) {
    const double g = std::isfinite(gamma) ? std::min(gamma, gtop) : gtop;
    return std::pair<double, double>{cx + sx * phi * std::cos(theta), cy - sy * phi * std::sin(theta) - sz * g};
  };
  std::string s = header(title);
  // Reference rings phi = pi/2 and pi in the base plane.
  for (double r : {kPi / 2, kPi}) {
    std::vector<std::pair<double, double>> ring;
    for (int i = 0; i <= 96; ++i) ring.push_back(proj(-kPi + 2 * kPi * i / 96, r, 0.0));
    s += polyline(ring, "#bbbbbb", 1.0);
  }
  s += polyline({proj(0, 0, 0), proj(0, 0, gtop)}, "#888888", 1.0);
  s += "<text x=\"" + f3(proj(0, 0, gtop).first + 6) + "\" y=\"" + f3(proj(0, 0, gtop).second) +
       "\" font-family=\"sans-serif\" font-size=\"11\">gamma " + f3(gtop) + "</text>\n";
  for (const auto& sl : p.slices) {
    std::vector<std::pair<double, double>> line;
    for (size_t k = 0; k < sl.gamma.size(); ++k) line.push_back(proj(sl.theta, sl.phi[k], sl.gamma[k]));
    s += polyline(line, hue(sl.theta), 1.2);
  }
  s += "<text x=\"12\" y=\"" + f3(kH - 12) +
       "\" font-family=\"sans-serif\" font-size=\"11\">base plane: phi e^(i theta); rings at phi = pi/2, pi</text>\n";
  return s + "</svg>\n";
}

std::string points_svg(const std::vector<cplx>& pts, const std::string& title) {
  double r = 1.0;
  for (const auto& z : pts)
    if (std::isfinite(std::abs(z))) r = std::max(r, std::max(std::abs(z.real()), std::abs(z.imag())));
  r *= 1.1;
  const double side = std::min(kW, kH) - 80, cx = kW / 2, cy = kH / 2 + 12, sc = side / (2 * r);
  auto px = [&](cplx z) { return std::pair<double, double>{cx + sc * z.real(), cy - sc * z.imag()}; };
  std::string s = header(title);
  s += polyline({px({-r, 0}), px({r, 0})}, "#999999", 1.0);
  s += polyline({px({0, -r}), px({0, r})}, "#999999", 1.0);
  std::vector<std::pair<double, double>> circle;
  for (int i = 0; i <= 128; ++i) circle.push_back(px(expi(2 * kPi * i / 128)));
  s += polyline(circle, "#cccccc", 1.0);
  for (const auto& z : pts) {
    if (!std::isfinite(std::abs(z))) continue;
    const auto [x, y] = px(z);
    s += "<circle cx=\"" + f3(x) + "\" cy=\"" + f3(y) + "\" r=\"1.5\" fill=\"#1f5fbf\"/>\n";
  }
  return s + "</svg>\n";
}

}  // namespace srg::plot
