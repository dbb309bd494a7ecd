#include "certun/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "certun/error.hpp"

namespace certun {

namespace {

Json alphas_json(const std::array<bool, 4>& a) { return Json::array({a[0], a[1], a[2], a[3]}); }

template <class T>
Json array_json(const std::array<T, 4>& a) {
  return Json::array({a[0], a[1], a[2], a[3]});
}

}  // namespace

Json to_json(const PassDiagnostics& d) {
  Json j;
  j["alphas"] = alphas_json(d.alphas);
  j["added_sizes"] = array_json(d.added_sizes);
  j["subtracted_sizes"] = array_json(d.subtracted_sizes);
  j["n_add"] = d.n_add;
  j["n_sub"] = d.n_sub;
  j["v_tilde_size"] = d.v_tilde_size;
  j["cross_category_overlap"] = d.cross_category_overlap;
  j["m_before"] = d.m_before;
  j["m_after"] = d.m_after;
  j["grad_diff_norm"] = d.grad_diff_norm;
  j["delta_norm"] = d.delta_norm;
  j["solver"] = {{"kind", to_string(d.solver)},
                 {"iterations", d.solver_iterations},
                 {"residual_norm", d.solver_residual},
                 {"converged", d.solver_converged}};
  j["warnings"] = d.warnings;
  j[kTimingKey] = {{"solver_seconds", d.solver_seconds}};
  return j;
}

Json to_json(const InfluenceResult& r) {
  Json j;
  j["m"] = r.m_used;
  j["delta_v_size"] = r.delta_v_size;
  j["v_tilde_size"] = r.v_tilde.size();
  j["solver"] = to_string(r.solver);
  j["norm_theta_star"] = norm2(r.theta_star);
  j["norm_theta_bar"] = norm2(r.theta_bar);
  j["norm_delta_theta_bar"] = norm2(r.delta_theta_bar);
  j["norm_grad_diff"] = norm2(r.grad_diff);
  j["theta_bar_equals_theta_star"] = r.theta_bar == r.theta_star;
  Json passes = Json::array();
  for (const auto& p : r.passes) passes.push_back(to_json(p));
  j["passes"] = std::move(passes);
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const AssumptionConstants& c) {
  return {{"lipschitz_L", c.lipschitz_L},
          {"convexity_lambda", c.convexity_lambda},
          {"loss_bound_C", c.loss_bound_C}};
}

Json to_json(const CertificateReport& c) {
  Json j;
  j["optimal_distance_bound"] = c.optimal_distance_bound;
  j["approx_distance_bound"] = c.approx_distance_bound;
  j["zeta"] = c.approx_distance_bound;
  j["delta_v_size"] = c.delta_v_size;
  j["v_tilde_size"] = c.v_tilde_size;
  j["m"] = c.m;
  j["norm_delta_theta_bar"] = c.norm_delta_theta_bar;
  j["epsilon"] = c.epsilon;
  j["delta"] = c.delta;
  j["sigma"] = c.sigma;
  j["noise_seed"] = c.noise_seed;
  j["constants"] = to_json(c.constants);
  if (c.actual_distance) j["actual_distance"] = *c.actual_distance;
  return j;
}

Json to_json(const EmpiricalConstants& c) {
  return {{"max_loss", c.max_loss},
          {"max_grad_norm", c.max_grad_norm},
          {"min_curvature", c.min_curvature},
          {"segment_points", c.segment_points}};
}

Json to_json(const ParameterDistances& d) {
  return {{"star_tilde", d.star_tilde}, {"tilde_bar", d.tilde_bar}, {"star_bar", d.star_bar}};
}

Json to_json(const TrainStats& s) {
  return {{"iterations", s.iterations},
          {"grad_norm", s.grad_norm},
          {"loss", s.loss},
          {"converged", s.converged}};
}

Json to_json(const EvalReport& e) {
  Json j;
  j["f1_micro"] = e.f1_micro;
  j["mi_auc"] = e.mi_auc ? Json(*e.mi_auc) : Json(nullptr);
  j["attr_unlearn_loss"] = e.attr_unlearn_loss ? Json(*e.attr_unlearn_loss) : Json(nullptr);
  Json times = Json::object();
  for (const auto& [phase, s] : e.wall_times) times[phase] = s;
  j[kTimingKey] = std::move(times);
  return j;
}

Json to_json(const UnlearnRequest& r) {
  std::size_t entries = 0;
  for (const auto& p : r.attrs_partial) entries += p.dims.size();
  return {{"nodes", r.nodes.size()},
          {"edges", r.edges.size()},
          {"attrs_full", r.attrs_full.size()},
          {"attrs_partial", r.attrs_partial.size()},
          {"attrs_partial_entries", entries}};
}

Json config_echo(const RunConfig& config) {
  Json j = Json::object();
  for (const auto& [k, v] : config_values(config)) j[k] = v;
  return j;
}

Json error_json(std::string_view code, const std::string& message,
                const std::vector<std::string>& details) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["status"] = "error";
  j["error"] = {{"code", code}, {"message", message}, {"details", details}};
  return j;
}

Json strip_timing(const Json& doc) {
  if (doc.is_object()) {
    Json out = Json::object();
    for (auto it = doc.begin(); it != doc.end(); ++it)
      if (it.key() != kTimingKey) out[it.key()] = strip_timing(it.value());
    return out;
  }
  if (doc.is_array()) {
    Json out = Json::array();
    for (const auto& item : doc) out.push_back(strip_timing(item));
    return out;
  }
  return doc;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw Error(ErrorCode::Numeric, "CSV row has " + std::to_string(row.size()) + " cells, header has " +
                                        std::to_string(header.size()));
  rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + cell(r[i]);
    out += "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Roughly five round tick values covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return ticks;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string render_svg(const LinePlot& plot) {
  const double width = 640, height = 420;
  const double left = 80, right = 180, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_y && s.y[i] <= 0)) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  if (!plot.log_y && y0 < 0 && y0 + pad >= 0) y0 = 0;

  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (ty(y) - y0) / (y1 - y0) * ph; };
  auto py_raw = [&](double t) { return top + ph - (t - y0) / (y1 - y0) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(left + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         escape_xml(plot.title) + "</text>\n";
  svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" +
         num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : nice_ticks(x0, x1)) {
    svg += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(px(t)) +
           "\" y2=\"" + num(top + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(px(t)) + "\" y=\"" + num(top + ph + 18) +
           "\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
  }
  for (double t : nice_ticks(y0, y1)) {
    svg += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(py_raw(t)) + "\" x2=\"" + num(left + pw) +
           "\" y2=\"" + num(py_raw(t)) + "\" stroke=\"#dddddd\"/>\n";
    const std::string label = plot.log_y ? tick_label(std::pow(10.0, t)) : tick_label(t);
    svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py_raw(t) + 4) + "\" text-anchor=\"end\">" +
           label + "</text>\n";
  }
  svg += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 15) +
         "\" text-anchor=\"middle\">" + escape_xml(plot.x_label) + "</text>\n";
  svg += "<text transform=\"translate(20 " + num(top + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape_xml(plot.y_label) + "</text>\n";

  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const auto& s = plot.series[si];
    const std::string color = kPalette[si % std::size(kPalette)];
    std::string points;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_y && s.y[i] <= 0)) continue;
      points += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
      svg += "<circle cx=\"" + num(px(s.x[i])) + "\" cy=\"" + num(py(s.y[i])) + "\" r=\"3\" fill=\"" +
             color + "\"/>\n";
    }
    if (!points.empty()) points.pop_back();
    svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"" +
           (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + " points=\"" + points + "\"/>\n";
    const double ly = top + 10 + 20 * static_cast<double>(si);
    svg += "<line x1=\"" + num(left + pw + 15) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(left + pw + 40) +
           "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"" +
           (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    svg += "<text x=\"" + num(left + pw + 45) + "\" y=\"" + num(ly + 4) + "\">" + escape_xml(s.name) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace certun
