#include "kendall/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "kendall/error.hpp"

namespace kendall {

namespace {

constexpr const char* kCsvHeader = "method,n,trial,error,m,k,seed";

bool usable(const ConvergenceRecord& r) { return !r.failed && r.error > kErrorFloor; }

OrderEstimate fit_loglog(const std::vector<std::pair<double, double>>& pts) {
  const auto count = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / count, my = sy / count;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::kInsufficientData, "all usable records share one n");
  OrderEstimate est;
  est.slope = sxy / sxx;
  est.intercept = my - est.slope * mx;
  double ss = 0;
  for (const auto& [x, y] : pts) {
    const double r = y - (est.intercept + est.slope * x);
    ss += r * r;
  }
  est.rms_residual = std::sqrt(ss / count);
  est.points = static_cast<int>(pts.size());
  return est;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error(ErrorKind::kIoFailure, "write to " + path.string() + " failed");
}

template <typename T>
T parse_field(std::string_view field, const std::string& where) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorKind::kIoFailure, where + ": bad field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

OrderEstimate estimate_order(const std::vector<ConvergenceRecord>& records,
                             TransportMethod method, std::optional<int> trial) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records) {
    if (r.method != method || (trial && r.trial != *trial) || !usable(r)) continue;
    pts.emplace_back(std::log(static_cast<double>(r.n)), std::log(r.error));
  }
  if (pts.size() < 3) {
    throw Error(ErrorKind::kInsufficientData,
                std::string("fewer than 3 usable records for ") + std::string(to_string(method)));
  }
  return fit_loglog(pts);
}

double median_order(const std::vector<ConvergenceRecord>& records, TransportMethod method) {
  std::vector<int> trials;
  for (const auto& r : records) {
    if (r.method == method) trials.push_back(r.trial);
  }
  std::sort(trials.begin(), trials.end());
  trials.erase(std::unique(trials.begin(), trials.end()), trials.end());

  std::vector<double> slopes;
  for (const int t : trials) {
    try {
      slopes.push_back(estimate_order(records, method, t).slope);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInsufficientData) throw;
    }
  }
  if (slopes.empty()) {
    throw Error(ErrorKind::kInsufficientData,
                std::string("no trial has enough data for ") + std::string(to_string(method)));
  }
  std::sort(slopes.begin(), slopes.end());
  const std::size_t mid = slopes.size() / 2;
  return slopes.size() % 2 == 1 ? slopes[mid] : 0.5 * (slopes[mid - 1] + slopes[mid]);
}

std::string format_csv(const std::vector<ConvergenceRecord>& records,
                       const std::vector<std::string>& comments) {
  if (records.empty()) throw Error(ErrorKind::kInvalidArgument, "no records to write");
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += kCsvHeader;
  out += '\n';
  char err[40];
  for (const auto& r : records) {
    if (r.failed) {
      std::snprintf(err, sizeof err, "nan");
    } else {
      std::snprintf(err, sizeof err, "%.16e", r.error);
    }
    out += std::string(to_string(r.method)) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.trial) + ',' + err + ',' + std::to_string(r.m) + ',' +
           std::to_string(r.k) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

void write_csv(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& path,
               const std::vector<std::string>& comments) {
  write_file(path, format_csv(records, comments));
}

std::vector<ConvergenceRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());
  std::vector<ConvergenceRecord> records;
  std::string line;
  bool seen_header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (!seen_header) {
      if (line != kCsvHeader) throw Error(ErrorKind::kIoFailure, where + ": unexpected header");
      seen_header = true;
      continue;
    }
    std::vector<std::string> f;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 7) throw Error(ErrorKind::kIoFailure, where + ": expected 7 fields");

    ConvergenceRecord r;
    const auto method = parse_method(f[0]);
    if (!method) throw Error(ErrorKind::kIoFailure, where + ": unknown method " + f[0]);
    r.method = *method;
    r.n = parse_field<int>(f[1], where);
    r.trial = parse_field<int>(f[2], where);
    r.error = parse_field<double>(f[3], where);
    r.failed = std::isnan(r.error);
    r.m = parse_field<int>(f[4], where);
    r.k = parse_field<int>(f[5], where);
    r.seed = parse_field<std::uint64_t>(f[6], where);
    records.push_back(r);
  }
  if (!seen_header) throw Error(ErrorKind::kIoFailure, path.string() + ": missing header");
  return records;
}

std::string format_svg_loglog(const std::vector<ConvergenceRecord>& records) {
  // method -> n -> errors across trials
  std::map<TransportMethod, std::map<int, std::vector<double>>> grouped;
  for (const auto& r : records) {
    if (usable(r)) grouped[r.method][r.n].push_back(r.error);
  }
  if (grouped.empty()) throw Error(ErrorKind::kInvalidArgument, "no plottable records");

  std::map<TransportMethod, std::vector<std::pair<double, double>>> curves;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (auto& [method, by_n] : grouped) {
    for (auto& [n, errs] : by_n) {
      std::sort(errs.begin(), errs.end());
      const std::size_t mid = errs.size() / 2;
      const double med = errs.size() % 2 ? errs[mid] : 0.5 * (errs[mid - 1] + errs[mid]);
      const double lx = std::log10(static_cast<double>(n)), ly = std::log10(med);
      curves[method].emplace_back(lx, ly);
      xmin = std::min(xmin, lx);
      xmax = std::max(xmax, lx);
      ymin = std::min(ymin, ly);
      ymax = std::max(ymax, ly);
    }
  }
  xmin = std::floor(xmin);
  xmax = std::max(std::ceil(xmax), xmin + 1);
  ymin = std::floor(ymin);
  ymax = std::max(std::ceil(ymax), ymin + 1);

  constexpr double kWidth = 720, kHeight = 480;
  constexpr double kLeft = 80, kRight = 140, kTop = 30, kBottom = 60;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double lx) { return kLeft + (lx - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double ly) { return kTop + (ymax - ly) / (ymax - ymin) * ph; };

  std::string out;
  char buf[256];
  auto emit = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    out += buf;
  };

  emit("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
       "viewBox=\"0 0 %.0f %.0f\" font-family=\"sans-serif\" font-size=\"12\">\n",
       kWidth, kHeight, kWidth, kHeight);
  emit("<rect x=\"0\" y=\"0\" width=\"%.0f\" height=\"%.0f\" fill=\"white\"/>\n", kWidth, kHeight);

  for (int d = static_cast<int>(xmin); d <= static_cast<int>(xmax); ++d) {
    const double x = px(d);
    emit("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#dddddd\"/>\n", x, kTop, x,
         kTop + ph);
    emit("<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">1e%d</text>\n", x, kTop + ph + 18, d);
  }
  for (int d = static_cast<int>(ymin); d <= static_cast<int>(ymax); ++d) {
    const double y = py(d);
    emit("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#dddddd\"/>\n", kLeft, y,
         kLeft + pw, y);
    emit("<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">1e%d</text>\n", kLeft - 6, y + 4, d);
  }
  emit("<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
       kLeft, kTop, pw, ph);
  emit("<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">steps n</text>\n", kLeft + pw / 2,
       kHeight - 15);
  emit("<text x=\"20\" y=\"%.2f\" text-anchor=\"middle\" transform=\"rotate(-90 20 %.2f)\">error</text>\n",
       kTop + ph / 2, kTop + ph / 2);

  auto colour = [](TransportMethod m) {
    switch (m) {
      case TransportMethod::kEuler: return "#1f77b4";
      case TransportMethod::kRK2: return "#ff7f0e";
      case TransportMethod::kRK4: return "#2ca02c";
      case TransportMethod::kPoleLadder: return "#d62728";
    }
    return "black";
  };

  int row = 0;
  for (const auto& [method, pts] : curves) {
    const std::string name(to_string(method));
    out += "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"";
    out += colour(method);
    out += "\" data-method=\"" + name + "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      emit("%s%.2f,%.2f", i ? " " : "", px(pts[i].first), py(pts[i].second));
    }
    out += "\"/>\n";
    for (const auto& [lx, ly] : pts) {
      emit("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n", px(lx), py(ly), colour(method));
    }
    const double ly = kTop + 20 + 20 * row++;
    const double lx = kLeft + pw + 15;
    emit("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" stroke-width=\"2\"/>\n",
         lx, ly, lx + 25, ly, colour(method));
    emit("<text x=\"%.2f\" y=\"%.2f\">%s</text>\n", lx + 32, ly + 4, name.c_str());
  }
  out += "</svg>\n";
  return out;
}

void write_svg_loglog(const std::vector<ConvergenceRecord>& records,
                      const std::filesystem::path& path) {
  write_file(path, format_svg_loglog(records));
}

}  // namespace kendall
