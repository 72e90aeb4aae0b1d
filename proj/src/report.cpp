#include "fibereig/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fibereig {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string sweep_csv(const SweepTable& table) {
  std::string out = "b,m,lambda,converged,n_used,residual\n";
  for (const SweepRow& row : table.rows) {
    out += format_double(row.b);
    out += ',';
    out += std::to_string(row.m);
    out += ',';
    out += format_double(row.lambda);
    out += ',';
    out += row.converged ? '1' : '0';
    out += ',';
    out += std::to_string(row.n_used);
    out += ',';
    out += format_double(row.residual);
    out += '\n';
  }
  return out;
}

std::string effective_csv(const SweepTable& table) {
  std::string out = "b,e_value,argmin_m\n";
  for (const SweepPerB& entry : table.per_b) {
    out += format_double(entry.b);
    out += ',';
    out += format_double(entry.e_value);
    out += ',';
    out += std::to_string(entry.argmin_m);
    out += '\n';
  }
  return out;
}

namespace {

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Tick spacing of the form {1, 2, 2.5, 5} * 10^k giving about `target` steps.
std::vector<double> nice_ticks(double lo, double hi, int target) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = 10.0 * mag;
  for (double f : {1.0, 2.0, 2.5, 5.0}) {
    if (raw <= f * mag) {
      step = f * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + step * 1e-9; t += step)
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  return ticks;
}

const char* stroke_color(int m) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#8c564b", "#e377c2", "#ff7f0e", "#17becf"};
  const int idx = m >= 0 ? m % 8 : 7 - ((-m - 1) % 8);
  return palette[idx];
}

const char* stroke_dash(int m) {
  if (m < 0) return "9,5";   // dashed
  if (m >= 2) return "2,4";  // dotted
  return "";                 // solid for m in {0, 1}
}

}  // namespace

std::string sweep_svg(const SweepTable& table) {
  constexpr double width = 800, height = 600;
  constexpr double left = 70, right = 650, top = 40, bottom = 540;

  double b_lo = 0, b_hi = 1, lam_hi = 1;
  bool any = false;
  for (const SweepRow& row : table.rows) {
    if (!row.converged) continue;
    if (!any) {
      b_lo = b_hi = row.b;
      lam_hi = row.lambda;
      any = true;
    } else {
      b_lo = std::min(b_lo, row.b);
      b_hi = std::max(b_hi, row.b);
      lam_hi = std::max(lam_hi, row.lambda);
    }
  }
  if (b_hi - b_lo < 1e-12) {
    b_lo -= 0.5;
    b_hi += 0.5;
  }
  const double lam_lo = 0.0;
  lam_hi = lam_hi <= lam_lo ? 1.0 : lam_hi * 1.05;

  auto sx = [&](double b) { return left + (b - b_lo) / (b_hi - b_lo) * (right - left); };
  auto sy = [&](double lam) { return bottom - (lam - lam_lo) / (lam_hi - lam_lo) * (bottom - top); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
      << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";

  for (double t : nice_ticks(b_lo, b_hi, 6)) {
    const double x = sx(t);
    svg << "<line x1=\"" << px(x) << "\" y1=\"" << px(top) << "\" x2=\"" << px(x) << "\" y2=\""
        << px(bottom) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << px(x) << "\" y=\"" << px(bottom + 22)
        << "\" font-size=\"13\" fill=\"#000000\" text-anchor=\"middle\">" << format_double(t)
        << "</text>\n";
  }
  for (double t : nice_ticks(lam_lo, lam_hi, 6)) {
    const double y = sy(t);
    svg << "<line x1=\"" << px(left) << "\" y1=\"" << px(y) << "\" x2=\"" << px(right) << "\" y2=\""
        << px(y) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << px(left - 8) << "\" y=\"" << px(y + 4)
        << "\" font-size=\"13\" fill=\"#000000\" text-anchor=\"end\">" << format_double(t)
        << "</text>\n";
  }
  svg << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\"" << px(right - left)
      << "\" height=\"" << px(bottom - top) << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << px((left + right) / 2) << "\" y=\"" << px(height - 14)
      << "\" font-size=\"15\" fill=\"#000000\" text-anchor=\"middle\">b</text>\n";
  svg << "<text x=\"18\" y=\"" << px((top + bottom) / 2)
      << "\" font-size=\"15\" fill=\"#000000\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << px((top + bottom) / 2) << ")\">lambda</text>\n";

  std::map<int, std::vector<std::pair<double, double>>> curves;
  for (const SweepRow& row : table.rows)
    if (row.converged) curves[row.m].emplace_back(row.b, row.lambda);

  for (const auto& [m, pts] : curves) {
    svg << "<polyline fill=\"none\" stroke=\"" << stroke_color(m) << "\" stroke-width=\"2\"";
    if (const char* dash = stroke_dash(m); dash[0] != '\0') svg << " stroke-dasharray=\"" << dash << "\"";
    svg << " points=\"";
    bool first = true;
    for (const auto& [b, lam] : pts) {
      if (lam > lam_hi) continue;  // keep the frame honest if a tall mode overshoots
      if (!first) svg << ' ';
      svg << px(sx(b)) << ',' << px(sy(lam));
      first = false;
    }
    svg << "\"/>\n";
  }

  double ly = top + 10;
  for (const auto& [m, pts] : curves) {
    svg << "<line x1=\"" << px(right + 16) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(right + 52)
        << "\" y2=\"" << px(ly) << "\" stroke=\"" << stroke_color(m) << "\" stroke-width=\"2\"";
    if (const char* dash = stroke_dash(m); dash[0] != '\0') svg << " stroke-dasharray=\"" << dash << "\"";
    svg << "/>\n";
    svg << "<text x=\"" << px(right + 60) << "\" y=\"" << px(ly + 4)
        << "\" font-size=\"13\" fill=\"#000000\">m = " << m << "</text>\n";
    ly += 22;
  }

  svg << "</svg>\n";
  return svg.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    // an existing directory is fine; a real failure surfaces at open below
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::ios_base::failure("failed while writing " + path.string());
}

}  // namespace fibereig
