#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "symbiolife/errors.hpp"
#include "symbiolife/experiment.hpp"
#include "symbiolife/stats.hpp"

namespace symbiolife {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header_of(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

enum class CsvKind { Archive, Fusion, Metrics, Measure, Other };

CsvKind classify(const fs::path& path) {
  const std::string h = header_of(path);
  if (h == kArchiveHeader) return CsvKind::Archive;
  if (h == kFusionHeader) return CsvKind::Fusion;
  if (h == kMetricsHeader) return CsvKind::Metrics;
  if (h == kMeasureHeader) return CsvKind::Measure;
  return CsvKind::Other;
}

void add_csv(ReportInputs& in, const fs::path& path, bool strict) {
  switch (classify(path)) {
    case CsvKind::Fusion: {
      auto rows = read_fusion_csv(path);
      in.fusion.insert(in.fusion.end(), rows.begin(), rows.end());
      break;
    }
    case CsvKind::Metrics: {
      auto rows = read_metrics_csv(path);
      in.metrics.insert(in.metrics.end(), rows.begin(), rows.end());
      break;
    }
    case CsvKind::Measure: {
      auto rows = read_measure_csv(path);
      in.measures.insert(in.measures.end(), rows.begin(), rows.end());
      break;
    }
    case CsvKind::Archive:
      break;
    case CsvKind::Other:
      if (strict) throw MalformedCsv(path.string() + ": unrecognized CSV header");
      break;
  }
}

// (layer, run) -> generation -> value
using RunKey = std::pair<std::string, int>;
using Series = std::map<RunKey, std::map<int, double>>;

Series measure_series(const std::vector<MeasureRow>& rows, const std::string& measure) {
  std::map<RunKey, std::map<int, std::pair<double, int>>> acc;
  for (const auto& r : rows) {
    if (r.measure != measure) continue;
    auto& cell = acc[{r.layer, r.run}][r.generation];
    cell.first += r.value;
    cell.second += 1;
  }
  Series out;
  for (const auto& [key, gens] : acc)
    for (const auto& [g, cell] : gens) out[key][g] = cell.first / cell.second;
  return out;
}

template <typename Get>
Series metrics_series(const std::vector<MetricsRow>& rows, Get get) {
  Series out;
  for (const auto& r : rows) out[{r.layer, r.run}][r.metrics.generation] = get(r.metrics);
  return out;
}

std::vector<std::string> layers_of(const Series& s) {
  std::set<std::string> layers;
  for (const auto& [key, _] : s) layers.insert(key.first);
  return {layers.begin(), layers.end()};
}

// Mean curve of each layer. Runs of a layer must cover the same generations.
std::vector<ChartSeries> layer_curves(const Series& s) {
  std::vector<ChartSeries> out;
  for (const auto& layer : layers_of(s)) {
    std::vector<int> gens;
    std::vector<std::vector<double>> runs;
    for (const auto& [key, values] : s) {
      if (key.first != layer) continue;
      std::vector<int> g;
      std::vector<double> v;
      for (const auto& [gen, val] : values) {
        g.push_back(gen);
        v.push_back(val);
      }
      if (runs.empty()) gens = g;
      if (g != gens) throw MalformedCsv("runs of " + layer + " cover different generations");
      runs.push_back(std::move(v));
    }
    const CurveSummary c = aggregate_curves(runs);
    ChartSeries cs{layer, {}, c.mean};
    for (int g : gens) cs.x.push_back(g);
    out.push_back(std::move(cs));
  }
  return out;
}

// Per-run scalar summaries of a series: mean over generations, or the value at one generation.
std::map<RunKey, double> per_run_mean(const Series& s) {
  std::map<RunKey, double> out;
  for (const auto& [key, values] : s) {
    double sum = 0.0;
    for (const auto& [g, v] : values) sum += v;
    out[key] = sum / static_cast<double>(values.size());
  }
  return out;
}

std::map<RunKey, double> per_run_at(const Series& s, int generation) {
  std::map<RunKey, double> out;
  for (const auto& [key, values] : s) {
    const auto it = values.find(generation);
    if (it != values.end()) out[key] = it->second;
  }
  return out;
}

std::map<RunKey, double> per_run_final(const Series& s) {
  std::map<RunKey, double> out;
  for (const auto& [key, values] : s)
    if (!values.empty()) out[key] = values.rbegin()->second;
  return out;
}

std::vector<double> layer_sample(const std::map<RunKey, double>& m, const std::string& layer) {
  std::vector<double> out;
  for (const auto& [key, v] : m)
    if (key.first == layer) out.push_back(v);
  return out;
}

std::string test_columns(const TestResult& t) {
  return num(t.statistic) + ',' + num(t.degrees_of_freedom) + ',' + num(t.p_value) + ',' + (t.significant ? "1" : "0") +
         ',' + (t.degenerate ? "1" : "0");
}

void welch_rows(std::ostream& out, const std::string& measure, const std::string& scope,
                const std::map<RunKey, double>& sample) {
  std::set<std::string> layer_set;
  for (const auto& [key, _] : sample) layer_set.insert(key.first);
  const std::vector<std::string> layers(layer_set.begin(), layer_set.end());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    for (std::size_t j = i + 1; j < layers.size(); ++j) {
      const auto a = layer_sample(sample, layers[i]);
      const auto b = layer_sample(sample, layers[j]);
      out << measure << ',' << scope << ',' << layers[i] << ',' << layers[j] << ',' << a.size() << ',' << b.size()
          << ',' << num(mean(a)) << ',' << num(mean(b)) << ',';
      if (a.size() < 2 || b.size() < 2) {
        out << ",,,,,needs at least two runs per layer\n";
        continue;
      }
      out << test_columns(welch_t_test(a, b)) << ",\n";
    }
  }
}

void correlation_row(std::ostream& out, const std::string& scope, const std::string& x_name,
                     const std::string& y_name, const std::map<RunKey, double>& x, const std::map<RunKey, double>& y) {
  std::vector<double> xs, ys;
  for (const auto& [key, v] : x) {
    const auto it = y.find(key);
    if (it == y.end()) continue;
    xs.push_back(v);
    ys.push_back(it->second);
  }
  out << scope << ',' << x_name << ',' << y_name << ',' << xs.size() << ',';
  try {
    const Correlation c = pearson_significance(xs, ys);
    out << num(c.r) << ',' << num(c.test.statistic) << ',' << num(c.test.degrees_of_freedom) << ','
        << num(c.test.p_value) << ',' << (c.test.significant ? 1 : 0) << ",\n";
  } catch (const Error& e) {
    std::string note = e.what();
    std::replace(note.begin(), note.end(), ',', ';');
    out << ",,,,," << note << '\n';
  }
}

void write_text(const fs::path& path, const std::string& text, std::vector<fs::path>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
  written.push_back(path);
}

// Round step for about five ticks over [lo, hi].
double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

int digits_for(double step) { return std::max(0, static_cast<int>(std::ceil(-std::log10(step) - 1e-9))); }

}  // namespace

ReportInputs load_report_inputs(const std::vector<fs::path>& inputs) {
  ReportInputs in;
  for (const auto& p : inputs) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::recursive_directory_iterator(p))
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) add_csv(in, f, false);
    } else if (fs::exists(p, ec)) {
      add_csv(in, p, true);
    } else {
      throw IoError("no such file or directory: " + p.string());
    }
  }
  return in;
}

std::string render_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<ChartSeries>& series) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  const double width = 760, height = 460, left = 70, right = 200, top = 50, bottom = 60;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!any) {
        x0 = x1 = s.x[i];
        y0 = y1 = s.y[i];
        any = true;
      }
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double ystep = nice_step(y1 - y0);
  y0 = std::floor(y0 / ystep) * ystep;
  y1 = std::ceil(y1 / ystep) * ystep;
  const double xstep = nice_step(x1 - x0);

  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * plot_w; };
  auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";

  const int ydigits = digits_for(ystep);
  const int yticks = static_cast<int>(std::lround((y1 - y0) / ystep));
  for (int i = 0; i <= yticks; ++i) {
    const double y = y0 + i * ystep;
    const std::string yy = fixed(py(y), 1);
    svg << "<line x1=\"" << left << "\" y1=\"" << yy << "\" x2=\"" << left + plot_w << "\" y2=\"" << yy
        << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << yy << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
        << fixed(y, ydigits) << "</text>\n";
  }
  const int xdigits = digits_for(xstep);
  const double xfirst = std::ceil(x0 / xstep) * xstep;
  for (int i = 0; xfirst + i * xstep <= x1 + xstep * 1e-6; ++i) {
    const double x = xfirst + i * xstep;
    const std::string xx = fixed(px(x), 1);
    svg << "<line x1=\"" << xx << "\" y1=\"" << top + plot_h << "\" x2=\"" << xx << "\" y2=\"" << top + plot_h + 5
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << xx << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << fixed(x, xdigits)
        << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 18 << "\" text-anchor=\"middle\">"
      << xml_escape(x_label) << "</text>\n";
  svg << "<text transform=\"translate(18 " << top + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << xml_escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % (sizeof kColors / sizeof kColors[0])];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      svg << (i ? " " : "") << fixed(px(s.x[i]), 1) << ',' << fixed(py(s.y[i]), 1);
    }
    svg << "\"/>\n";
    const double ly = top + 10 + 20.0 * static_cast<double>(k);
    svg << "<line x1=\"" << left + plot_w + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 40 << "\" y2=\""
        << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + plot_w + 46 << "\" y=\"" << ly << "\" dominant-baseline=\"middle\">"
        << xml_escape(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<fs::path> cmd_report(const ReportInputs& inputs, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<fs::path> written;

  const Series vs_random = measure_series(inputs.measures, "vs-random");
  const Series past = measure_series(inputs.measures, "vs-past-winners");
  const Series area = metrics_series(inputs.metrics, [](const GenerationMetrics& m) { return m.mean_area; });
  const Series density = metrics_series(inputs.metrics, [](const GenerationMetrics& m) { return m.mean_density; });
  const Series diversity = metrics_series(inputs.metrics, [](const GenerationMetrics& m) { return m.diversity; });
  const Series relative =
      metrics_series(inputs.metrics, [](const GenerationMetrics& m) { return m.mean_elite_fitness; });

  // Charts.
  struct Chart {
    const char* file;
    const char* title;
    const char* y_label;
    const Series* data;
  };
  const Chart charts[] = {
      {"fitness_vs_random.svg", "Elite fitness against random seeds", "fraction of games won", &vs_random},
      {"area.svg", "Mean elite seed area", "cells", &area},
      {"density.svg", "Mean elite seed density", "fraction of live cells", &density},
      {"diversity.svg", "Elite diversity", "std-dev of relative fitness", &diversity},
      {"past_winners.svg", "Fitness against past winners", "f_n", &past},
  };
  for (const auto& c : charts) {
    if (c.data->empty()) continue;
    write_text(out_dir / c.file, render_line_chart(c.title, "generation", c.y_label, layer_curves(*c.data)), written);
  }

  // Welch tests between layers (mean over generations, final generation, generation 30).
  {
    std::ostringstream t;
    t << "measure,scope,layer_a,layer_b,n_a,n_b,mean_a,mean_b,t,df,p,significant,degenerate,note\n";
    for (const auto& [name, s] : {std::pair<const char*, const Series*>{"vs-random", &vs_random},
                                  {"vs-past-winners", &past},
                                  {"relative-fitness", &relative}}) {
      if (s->empty()) continue;
      welch_rows(t, name, "all-generations", per_run_mean(*s));
      welch_rows(t, name, "final", per_run_final(*s));
      const auto at30 = per_run_at(*s, 30);
      if (!at30.empty() && at30 != per_run_final(*s)) welch_rows(t, name, "generation-30", at30);
    }
    write_text(out_dir / "layer_welch.csv", t.str(), written);
  }

  // Correlations between per-run means of fitness, area, density and diversity.
  if (!area.empty()) {
    std::ostringstream t;
    t << "scope,x,y,n,r,t,df,p,significant,note\n";
    std::vector<std::pair<std::string, std::map<RunKey, double>>> vars;
    if (!vs_random.empty()) vars.emplace_back("fitness", per_run_mean(vs_random));
    vars.emplace_back("area", per_run_mean(area));
    vars.emplace_back("density", per_run_mean(density));
    vars.emplace_back("diversity", per_run_mean(diversity));
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (std::size_t j = i + 1; j < vars.size(); ++j)
        correlation_row(t, "all-generations", vars[i].first, vars[j].first, vars[i].second, vars[j].second);
    write_text(out_dir / "correlations.csv", t.str(), written);
  }

  // The two external measures against each other.
  if (!vs_random.empty() && !past.empty()) {
    std::ostringstream t;
    t << "scope,x,y,n,r,t,df,p,significant,note\n";
    correlation_row(t, "all-generations", "vs-random", "vs-past-winners", per_run_mean(vs_random), per_run_mean(past));
    correlation_row(t, "final", "vs-random", "vs-past-winners", per_run_final(vs_random), per_run_final(past));
    write_text(out_dir / "external_correlation.csv", t.str(), written);
  }

  // Fusion events per run of every Layer 4 variant, with layer means and Welch tests.
  {
    std::map<RunKey, std::vector<FusionEvent>> events;
    for (const auto& m : inputs.metrics)
      if (m.layer.rfind("layer4", 0) == 0) events[{m.layer, m.run}];
    for (const auto& f : inputs.fusion) events[{f.layer, f.run}].push_back(f.event);
    if (!events.empty()) {
      std::ostringstream t;
      t << "layer,run,attempts,evaluated,accepted,no_parts_benefit,one_part_benefits,both_parts_benefit,"
           "pct_no_parts,pct_one_part,pct_both_parts,note\n";
      std::map<std::string, std::vector<FusionSummary>> by_layer;
      std::map<RunKey, double> both_pct, one_pct, no_pct;
      for (const auto& [key, ev] : events) {
        const FusionSummary s = fusion_event_summary(ev);
        by_layer[key.first].push_back(s);
        t << key.first << ',' << key.second << ',' << s.attempts << ',' << s.evaluated << ',' << s.accepted << ','
          << s.counts[0] << ',' << s.counts[1] << ',' << s.counts[2] << ',';
        if (s.percent) {
          t << num((*s.percent)[0]) << ',' << num((*s.percent)[1]) << ',' << num((*s.percent)[2]) << ",\n";
          no_pct[key] = (*s.percent)[0];
          one_pct[key] = (*s.percent)[1];
          both_pct[key] = (*s.percent)[2];
        } else {
          t << ",,,excluded from means: no evaluated fusions\n";
        }
      }
      for (const auto& [layer, list] : by_layer) {
        double attempts = 0, evaluated = 0, accepted = 0;
        std::array<double, 3> counts{};
        for (const auto& s : list) {
          attempts += s.attempts;
          evaluated += s.evaluated;
          accepted += s.accepted;
          for (std::size_t i = 0; i < 3; ++i) counts[i] += s.counts[i];
        }
        const double n = static_cast<double>(list.size());
        t << layer << ",mean," << num(attempts / n) << ',' << num(evaluated / n) << ',' << num(accepted / n) << ','
          << num(counts[0] / n) << ',' << num(counts[1] / n) << ',' << num(counts[2] / n) << ',';
        const auto a = layer_sample(no_pct, layer), b = layer_sample(one_pct, layer), c = layer_sample(both_pct, layer);
        if (c.empty()) {
          t << ",,,no run had evaluated fusions\n";
        } else {
          t << num(mean(a)) << ',' << num(mean(b)) << ',' << num(mean(c)) << ",mean over " << c.size() << " runs\n";
        }
      }
      write_text(out_dir / "fusion_summary.csv", t.str(), written);

      std::ostringstream w;
      w << "measure,scope,layer_a,layer_b,n_a,n_b,mean_a,mean_b,t,df,p,significant,degenerate,note\n";
      welch_rows(w, "pct_no_parts", "per-run", no_pct);
      welch_rows(w, "pct_one_part", "per-run", one_pct);
      welch_rows(w, "pct_both_parts", "per-run", both_pct);
      write_text(out_dir / "fusion_welch.csv", w.str(), written);
    }
  }

  // Final-generation summary per layer.
  if (!inputs.metrics.empty()) {
    std::ostringstream t;
    t << "layer,runs,vs_random,vs_past_winners,area,density,diversity,relative_fitness\n";
    const auto fr = per_run_final(vs_random), fp = per_run_final(past), fa = per_run_final(area),
               fd = per_run_final(density), fv = per_run_final(diversity), ff = per_run_final(relative);
    auto layer_mean = [](const std::map<RunKey, double>& m, const std::string& layer) {
      const auto s = layer_sample(m, layer);
      return s.empty() ? std::string() : num(mean(s));
    };
    for (const auto& layer : layers_of(area)) {
      t << layer << ',' << layer_sample(fa, layer).size() << ',' << layer_mean(fr, layer) << ','
        << layer_mean(fp, layer) << ',' << layer_mean(fa, layer) << ',' << layer_mean(fd, layer) << ','
        << layer_mean(fv, layer) << ',' << layer_mean(ff, layer) << '\n';
    }
    write_text(out_dir / "final_summary.csv", t.str(), written);
  }

  return written;
}

}  // namespace symbiolife
