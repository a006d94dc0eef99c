#include "funnelsim/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace funnelsim {

namespace {

void header_group(std::ostream& out, const char* prefix, std::size_t count, std::size_t first_index,
                  const char* suffix = "") {
  for (std::size_t i = 0; i < count; ++i) {
    out << ',' << prefix << (i + first_index) << suffix;
  }
}

void row_group(std::ostream& out, const std::vector<double>& values) {
  for (double v : values) {
    out << ',' << format_number(v);
  }
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    s += (i ? "," : "") + format_number(values[i]);
  }
  return s;
}

struct Panel {
  double x0, y0, width, height;
  double t_min, t_max, v_min, v_max;

  double px(double t) const { return x0 + (t - t_min) / (t_max - t_min) * width; }
  double py(double v) const { return y0 + height - (v - v_min) / (v_max - v_min) * height; }
};

void polyline(std::ostream& out, const Panel& p, const std::vector<TraceRecord>& trace, const char* colour,
              double (*pick)(const TraceRecord&)) {
  // At most ~2000 vertices per line keeps the file small for long traces.
  const std::size_t stride = std::max<std::size_t>(1, trace.size() / 2000);
  out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\" points=\"";
  char buf[64];
  for (std::size_t i = 0; i < trace.size(); i += stride) {
    const double v = std::clamp(pick(trace[i]), p.v_min, p.v_max);
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", p.px(trace[i].t), p.py(v));
    out << buf;
  }
  out << "\"/>\n";
}

void axes(std::ostream& out, const Panel& p, const std::string& label) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"#444\"/>\n",
                p.x0, p.y0, p.width, p.height);
  out << buf;
  for (int k = 0; k <= 4; ++k) {
    const double v = p.v_min + (p.v_max - p.v_min) * k / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"end\">%.3g</text>\n", p.x0 - 4,
                  p.py(v) + 3, v);
    out << buf;
    const double t = p.t_min + (p.t_max - p.t_min) * k / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"middle\">%.3g</text>\n", p.px(t),
                  p.y0 + p.height + 12, t);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\">", p.x0, p.y0 - 6);
  out << buf << label << "</text>\n";
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  if (trace.empty()) {
    out << "t\n";
    return;
  }
  const auto& first = trace.front();
  out << 't';
  header_group(out, "y_", first.y.size(), 1);
  header_group(out, "yref_", first.y_ref.size(), 1);
  header_group(out, "u_", first.u.size(), 1);
  header_group(out, "w_", first.w.size(), 1);
  header_group(out, "e", first.error_norms.size(), 0, "norm");
  header_group(out, "k", first.gains.size(), 0);
  header_group(out, "rad", first.radii.size(), 0);
  out << '\n';
  for (const auto& rec : trace) {
    out << format_number(rec.t);
    row_group(out, rec.y);
    row_group(out, rec.y_ref);
    row_group(out, rec.u);
    row_group(out, rec.w);
    row_group(out, rec.error_norms);
    row_group(out, rec.gains);
    row_group(out, rec.radii);
    out << '\n';
  }
}

void write_report(std::ostream& out, const std::string& name, const RunReport& report,
                  const VerificationVerdict& verdict, const std::vector<std::string>& notes) {
  out << "scenario=" << name << '\n';
  out << "completed=" << (report.completed ? "true" : "false") << '\n';
  if (!report.failure.empty()) {
    out << "failure=" << report.failure << '\n';
  }
  out << "horizon=" << format_number(report.horizon) << '\n';
  out << "final_time=" << format_number(report.final_time) << '\n';
  out << "steps=" << report.steps << '\n';
  out << "rejections=" << report.rejections << '\n';
  out << "sup_u=" << format_number(report.sup_u) << '\n';
  out << "sup_k=" << join(report.sup_gain) << '\n';
  out << "sup_y_derivatives=" << join(report.sup_derivative) << '\n';
  out << "min_margin=" << join(report.min_margin) << '\n';
  out << "max_phi_e=" << join(report.max_funnel_ratio) << '\n';
  out << "verify_horizon_reached=" << (verdict.horizon_reached ? "pass" : "fail") << '\n';
  out << "verify_bounded=" << (verdict.bounded ? "pass" : "fail") << '\n';
  out << "verify_inside_funnels=" << (verdict.inside_funnels ? "pass" : "fail") << '\n';
  out << "epsilon=" << join(verdict.epsilon) << '\n';
  out << "worst_row=" << verdict.worst_row << '\n';
  out << "verdict=" << (verdict.passed() ? "pass" : "fail") << '\n';
  for (std::size_t i = 0; i < notes.size(); ++i) {
    out << "note_" << i << '=' << notes[i] << '\n';
  }
}

void write_svg(std::ostream& out, const std::vector<TraceRecord>& trace, const std::string& title) {
  const double t_min = trace.empty() ? 0.0 : trace.front().t;
  double t_max = trace.empty() ? 1.0 : trace.back().t;
  if (!(t_max > t_min)) {
    t_max = t_min + 1.0;
  }
  double e_max = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  for (const auto& rec : trace) {
    if (!rec.radii.empty() && std::isfinite(rec.radii[0])) {
      e_max = std::max(e_max, rec.radii[0]);
    }
    if (!rec.error_norms.empty()) {
      e_max = std::max(e_max, rec.error_norms[0]);
    }
    if (!rec.u.empty()) {
      u_min = std::min(u_min, rec.u[0]);
      u_max = std::max(u_max, rec.u[0]);
    }
  }
  if (!(e_max > 0.0)) e_max = 1.0;
  if (!(u_max > u_min)) u_max = u_min + 1.0;

  const Panel top{60, 40, 620, 220, t_min, t_max, 0.0, e_max * 1.05};
  const Panel bottom{60, 320, 620, 220, t_min, t_max, u_min, u_max};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"580\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"360\" y=\"18\" font-size=\"14\" text-anchor=\"middle\">" << title << "</text>\n";
  axes(out, top, "|e(t)| (blue) and funnel radius 1/phi(t) (red)");
  polyline(out, top, trace, "#c0392b", [](const TraceRecord& r) { return r.radii.empty() ? 0.0 : r.radii[0]; });
  polyline(out, top, trace, "#2166ac",
           [](const TraceRecord& r) { return r.error_norms.empty() ? 0.0 : r.error_norms[0]; });
  axes(out, bottom, "input u(t)");
  polyline(out, bottom, trace, "#1a7f37", [](const TraceRecord& r) { return r.u.empty() ? 0.0 : r.u[0]; });
  out << "</svg>\n";
}

}  // namespace funnelsim
