#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace sbc::cli {

namespace {

constexpr double W = 640, H = 440, L = 80, R = 20, T = 40, B = 60;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string esc(const std::string& s) {
  std::string r;
  for (char ch : s) {
    if (ch == '<') r += "&lt;";
    else if (ch == '>') r += "&gt;";
    else if (ch == '&') r += "&amp;";
    else r += ch;
  }
  return r;
}

struct Axis {
  bool log;
  double lo, hi;
  double map(double v) const {
    const double a = log ? std::log10(v) : v;
    return (a - lo) / (hi - lo);
  }
  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      for (double e = std::ceil(lo); e <= hi + 1e-12; ++e) t.push_back(std::pow(10.0, e));
      return t;
    }
    const double span = hi - lo;
    const double step0 = std::pow(10.0, std::floor(std::log10(span / 5)));
    double step = step0;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (span / (step0 * m) <= 7) {
        step = step0 * m;
        break;
      }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) t.push_back(std::fabs(v) < 1e-12 * span ? 0 : v);
    return t;
  }
};

Axis make_axis(bool log, const std::vector<double>& v) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double a : v) {
    const double b = log ? std::log10(a) : a;
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  const double pad = 0.04 * (hi - lo);
  return {log, lo - pad, hi + pad};
}

}  // namespace

std::string render_svg(const PlotSpec& p) {
  std::vector<PlotSeries> ser = p.series;
  std::vector<double> xs, ys;
  for (auto& s : ser) {
    PlotSeries k = s;
    k.x.clear();
    k.y.clear();
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if ((p.logx && s.x[i] <= 0) || (p.logy && s.y[i] <= 0)) continue;
      k.x.push_back(s.x[i]);
      k.y.push_back(s.y[i]);
    }
    xs.insert(xs.end(), k.x.begin(), k.x.end());
    ys.insert(ys.end(), k.y.begin(), k.y.end());
    s = k;
  }
  const Axis ax = make_axis(p.logx, xs), ay = make_axis(p.logy, ys);
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double v) { return L + pw * ax.map(v); };
  auto py = [&](double v) { return T + ph * (1 - ay.map(v)); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << esc(p.title) << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ax.ticks()) {
    const double x = px(t);
    os << "<line x1=\"" << fmt(x) << "\" y1=\"" << T + ph << "\" x2=\"" << fmt(x) << "\" y2=\"" << T + ph + 5
       << "\" stroke=\"black\"/><text x=\"" << fmt(x) << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">"
       << fmt(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << fmt(y) << "\" x2=\"" << L << "\" y2=\"" << fmt(y)
       << "\" stroke=\"black\"/><text x=\"" << L - 8 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">" << fmt(t)
       << "</text>\n";
  }
  os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << esc(p.xlabel)
     << "</text>\n";
  os << "<text transform=\"translate(16," << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << esc(p.ylabel)
     << "</text>\n";
  int row = 0;
  for (const auto& s : ser) {
    if (s.line) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) os << (i ? " " : "") << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i]));
      os << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        os << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\"3\" fill=\"" << s.color
           << "\"/>\n";
    }
    const double ly = T + 14 + 16 * row++;
    os << "<rect x=\"" << L + 10 << "\" y=\"" << ly - 8 << "\" width=\"10\" height=\"10\" fill=\"" << s.color
       << "\"/><text x=\"" << L + 26 << "\" y=\"" << ly + 1 << "\">" << esc(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace sbc::cli
