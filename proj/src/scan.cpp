#include "tsqw/scan.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "tsqw/acceptance.hpp"
#include "tsqw/errors.hpp"
#include "tsqw/observables.hpp"
#include "tsqw/rg_flow.hpp"

namespace tsqw {

namespace {

using json = nlohmann::json;

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c{"phase-diagram", "critical-scan", "exponents", "rg-flow",
                                          "wannier",       "velocity",      "winding-trace", "acceptance"};
  return c;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(x))
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, v));
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v));
  return static_cast<int>(x);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string na_or(double v) { return std::isfinite(v) ? format_number(v) : "NA"; }

const CriticalLine& selected_line(const ScanConfig& cfg, LineId fallback = LineId::Red2) {
  return critical_line(cfg.line.value_or(fallback));
}

CoinAngles selected_angles(const ScanConfig& cfg) {
  if (cfg.line) {
    if (!cfg.theta1) throw ConfigError("--line needs --theta1 to pick a point on the line");
    return selected_line(cfg).at(*cfg.theta1);
  }
  return {cfg.theta1.value_or(0.0), cfg.theta2.value_or(0.0)};
}

std::vector<double> theta_samples(const ScanConfig& cfg, const CriticalLine& line, int n) {
  Interval r = line.theta1_domain;
  if (cfg.theta1_range) {
    r.lo = std::max(r.lo, cfg.theta1_range->lo);
    r.hi = std::min(r.hi, cfg.theta1_range->hi);
  }
  if (!(r.hi > r.lo)) throw ConfigError("--theta1-range does not overlap the line domain");
  std::vector<double> t(n);
  for (int j = 0; j < n; ++j) t[j] = r.lo + (j + 0.5) * (r.hi - r.lo) / n;
  return t;
}

std::string closings_text(const std::vector<GapClosing>& g) {
  std::string s;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) s += ';';
    s += format_number(g[i].k);
  }
  return s;
}

json cell_json(const std::string& c) {
  if (c == "NA") return nullptr;
  char* end = nullptr;
  const double x = std::strtod(c.c_str(), &end);
  if (!c.empty() && end == c.c_str() + c.size()) return x;
  return c;
}

json config_json(const ScanConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["resolution"] = cfg.resolution;
  j["k-grid"] = cfg.k_grid;
  j["line"] = cfg.line ? json(std::string(line_name(*cfg.line))) : json(nullptr);
  j["theta1-range"] = cfg.theta1_range ? json::array({cfg.theta1_range->lo, cfg.theta1_range->hi}) : json(nullptr);
  j["delta"] = cfg.delta;
  j["output"] = cfg.output;
  j["format"] = cfg.format == OutputFormat::Csv ? "csv" : "json";
  j["jobs"] = cfg.jobs;
  j["steps"] = cfg.steps;
  j["points"] = cfg.points;
  j["r-max"] = cfg.r_max;
  j["theta1"] = cfg.theta1 ? json(*cfg.theta1) : json(nullptr);
  j["theta2"] = cfg.theta2 ? json(*cfg.theta2) : json(nullptr);
  j["offsets"] = cfg.offsets;
  j["dl"] = cfg.dl;
  j["only"] = cfg.only;
  return j;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << body;
  f.close();
  if (!f) throw IoError("write failed for " + path);
}

std::string render(const Table& t, OutputFormat f) {
  std::ostringstream os;
  write_table(t, f, os);
  return os.str();
}

std::string sibling(const std::string& output, const std::string& tag) {
  const auto dot = output.find_last_of('.');
  const auto slash = output.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return output + "." + tag;
  return output.substr(0, dot) + "." + tag + output.substr(dot);
}

}  // namespace

void apply_config_entry(ScanConfig& cfg, const std::string& key_in, const std::string& value) {
  const std::string key = trim(key_in);
  const std::string v = trim(value);
  if (key == "resolution") {
    cfg.resolution = parse_int(key, v);
  } else if (key == "k-grid") {
    cfg.k_grid = parse_int(key, v);
  } else if (key == "line") {
    const auto id = parse_line(v);
    if (!id) throw ConfigError("line: unknown line '" + v + "' (red1..red3, blue1, blue2, op1..op3)");
    cfg.line = *id;
  } else if (key == "theta1-range") {
    auto parts = split(v, v.find(':') != std::string::npos ? ':' : ',');
    if (parts.size() != 2) throw ConfigError("theta1-range: expected lo:hi");
    const Interval r{parse_double(key, parts[0]), parse_double(key, parts[1])};
    if (!(r.hi > r.lo)) throw ConfigError("theta1-range: lo must be below hi");
    cfg.theta1_range = r;
  } else if (key == "delta") {
    cfg.delta = parse_double(key, v);
  } else if (key == "output") {
    cfg.output = v;
  } else if (key == "format") {
    if (v == "csv")
      cfg.format = OutputFormat::Csv;
    else if (v == "json")
      cfg.format = OutputFormat::Json;
    else
      throw ConfigError("format: expected csv or json");
  } else if (key == "jobs") {
    cfg.jobs = parse_int(key, v);
  } else if (key == "steps") {
    cfg.steps = parse_int(key, v);
  } else if (key == "points") {
    cfg.points = parse_int(key, v);
  } else if (key == "r-max") {
    cfg.r_max = parse_int(key, v);
  } else if (key == "theta1") {
    cfg.theta1 = parse_double(key, v);
  } else if (key == "theta2") {
    cfg.theta2 = parse_double(key, v);
  } else if (key == "offsets") {
    cfg.offsets.clear();
    for (const auto& p : split(v, ',')) cfg.offsets.push_back(parse_double(key, p));
  } else if (key == "dl") {
    cfg.dl = parse_double(key, v);
  } else if (key == "only") {
    cfg.only = split(v, ',');
  } else if (key == "command") {
    cfg.command = v;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void apply_config_file(ScanConfig& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::string line;
  int n = 0;
  while (std::getline(f, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("{}:{}: expected key=value", path, n));
    apply_config_entry(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void validate(const ScanConfig& cfg) {
  if (std::find(known_commands().begin(), known_commands().end(), cfg.command) == known_commands().end())
    throw ConfigError("unknown command '" + cfg.command + "'");
  if (cfg.resolution < 2 || cfg.resolution > 4001) throw ConfigError("resolution must lie in [2, 4001]");
  if (cfg.k_grid < 64 || cfg.k_grid > (1 << 22)) throw ConfigError("k-grid must lie in [64, 4194304]");
  if (!(cfg.delta > 0 && cfg.delta < 0.1)) throw ConfigError("delta must lie in (0, 0.1)");
  if (cfg.jobs < 0) throw ConfigError("jobs must be >= 0");
  if (cfg.steps < 1 || cfg.steps > 1000000) throw ConfigError("steps must lie in [1, 1e6]");
  if (cfg.points < 5 || cfg.points > 10000) throw ConfigError("points must lie in [5, 10000]");
  if (cfg.r_max < 0 || cfg.r_max > 100000) throw ConfigError("r-max must lie in [0, 1e5]");
  if (!(cfg.dl > 0 && cfg.dl <= 1e-2)) throw ConfigError("dl must lie in (0, 1e-2]");
  if (cfg.offsets.empty()) throw ConfigError("offsets must not be empty");
  for (double o : cfg.offsets)
    if (!(o > 0 && o < 1)) throw ConfigError("offsets must lie in (0, 1)");
}

std::string format_number(double v) {
  if (v == 0) return "0";  // folds -0
  return fmt::format("{:.12g}", v);
}

void write_table(const Table& t, OutputFormat f, std::ostream& os) {
  if (f == OutputFormat::Csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
    return;
  }
  json arr = json::array();
  for (const auto& r : t.rows) {
    json o = json::object();
    for (std::size_t i = 0; i < t.columns.size() && i < r.size(); ++i) o[t.columns[i]] = cell_json(r[i]);
    arr.push_back(std::move(o));
  }
  os << arr.dump(1) << '\n';
}

Table phase_diagram_table(const ScanConfig& cfg) {
  const PhaseDiagram pd = phase_diagram(cfg.resolution, cfg.k_grid, Execution::Parallel);
  Table t{{"theta1", "theta2", "w", "min_gap", "line_id"}, {}};
  t.rows.reserve(pd.cells.size());
  for (const auto& c : pd.cells) {
    t.rows.push_back({format_number(c.theta1), format_number(c.theta2), c.gapless ? "NA" : std::to_string(c.w),
                      format_number(c.min_gap), c.gapless ? std::string(line_name(c.nearest_line)) : "NA"});
  }
  return t;
}

Table critical_scan_table(const ScanConfig& cfg) {
  const CriticalLine& line = selected_line(cfg);
  const auto thetas = theta_samples(cfg, line, cfg.steps);
  Table t{{"line", "theta1", "theta2", "gapless", "closings", "k_peak", "F_peak", "xi_c", "oz_r2", "w_c", "w_c_raw"},
          std::vector<std::vector<std::string>>(thetas.size())};
  const int nk = cfg.k_grid;
  for_each_index(static_cast<std::ptrdiff_t>(thetas.size()), Execution::Parallel, [&](std::ptrdiff_t j) {
    const double th = thetas[j];
    std::vector<std::string> row{std::string(line_name(line.id)), format_number(th), format_number(line.theta2_at(th))};
    if (!line.gapless_at(th)) {
      row.insert(row.end(), {"0", "", "NA", "NA", "NA", "NA", "NA", "NA"});
      t.rows[j] = std::move(row);
      return;
    }
    const auto closings = gap_closing_momenta(line, th);
    double best = -1, kb = 0;
    for (int i = 0; i < nk; ++i) {
      const double k = -kPi + (i + 0.5) * kTwoPi / nk;
      double f;
      try {
        f = std::abs(curvature_function(line, th, k));
      } catch (const GapClosingError&) {
        continue;
      }
      if (f > best) {
        best = f;
        kb = k;
      }
    }
    const double kp = locate_peak(line, th, kb, kTwoPi / nk);
    std::string F = "NA", xi = "NA", r2 = "NA";
    try {
      const OZFit fit = oz_fit_line(line, th, kp);
      F = format_number(fit.F_peak);
      xi = format_number(fit.xi_sq > 0 ? fit.xi_c : -fit.xi_c);
      r2 = format_number(fit.r_squared);
    } catch (const FitRejected&) {
    } catch (const GapClosingError&) {
    }
    std::string wc = "NA", wr = "NA";
    try {
      const CriticalWinding cw = critical_winding(line, th, cfg.delta);
      wc = std::to_string(cw.w_c);
      wr = format_number(cw.w_c_raw);
    } catch (const std::domain_error&) {
    }
    row.insert(row.end(), {"1", closings_text(closings), format_number(canonical_momentum(kp)), F, xi, r2, wc, wr});
    t.rows[j] = std::move(row);
  });
  return t;
}

Table exponents_table(const ScanConfig& cfg) {
  struct Job {
    const CriticalLine* line;
    MulticriticalPoint mc;
  };
  std::vector<Job> jobs;
  for (const auto& mc : multicritical_points()) {
    for (const auto& l : critical_lines()) {
      if (cfg.line && l.id != *cfg.line) continue;
      if (!transition_info(l, mc).hosts_transition) continue;
      if (cfg.theta1_range && !cfg.theta1_range->contains(mc.angles.theta1)) continue;
      jobs.push_back({&l, mc});
    }
  }
  Table t{{"line", "mc_theta1", "mc_theta2", "kind", "side", "k0", "gamma", "gamma_err", "nu", "nu_err", "gamma_plain",
           "nu_plain", "z", "z_r2"},
          std::vector<std::vector<std::string>>(jobs.size())};
  ExponentOptions opt;
  opt.distances = logspace(1e-3, 1e-1, cfg.points);
  for_each_index(static_cast<std::ptrdiff_t>(jobs.size()), Execution::Parallel, [&](std::ptrdiff_t j) {
    const Job& jb = jobs[j];
    const ExponentFit e = critical_exponents(*jb.line, jb.mc, opt);
    const DynamicalExponent z = dynamical_exponent(jb.mc);
    t.rows[j] = {std::string(line_name(jb.line->id)),
                 format_number(jb.mc.angles.theta1),
                 format_number(jb.mc.angles.theta2),
                 jb.mc.kind == Dispersion::Linear ? "linear" : "quadratic",
                 std::to_string(e.side),
                 format_number(canonical_momentum(e.k0s.front())),
                 format_number(e.gamma),
                 format_number(e.gamma_err),
                 format_number(e.nu),
                 format_number(e.nu_err),
                 format_number(e.gamma_plain),
                 format_number(e.nu_plain),
                 format_number(z.z),
                 format_number(z.r_squared)};
  });
  return t;
}

Table rg_flow_table(const ScanConfig& cfg) {
  const CriticalLine& line = selected_line(cfg);
  const int n = std::max(cfg.resolution, 2);
  Interval r = cfg.theta1_range.value_or(Interval{-kPi, kPi});
  Table t{{"family", "theta1", "rhs_closed", "rhs_numeric", "near_singular"}, std::vector<std::vector<std::string>>(n)};
  for_each_index(n, Execution::Parallel, [&](std::ptrdiff_t j) {
    const double th = r.lo + (j + 0.5) * (r.hi - r.lo) / n;
    double c = std::nan(""), num = std::nan("");
    try {
      c = rg_rhs_closed(line.family, th);
    } catch (const std::domain_error&) {
    }
    try {
      num = rg_rhs_numeric(line, th);
    } catch (const std::domain_error&) {
    }
    t.rows[j] = {std::string(family_name(line.family)), format_number(th), na_or(c), na_or(num),
                 near_flow_singularity(line.family, th, 1e-2) ? "1" : "0"};
  });
  return t;
}

Table rg_points_table(const ScanConfig& cfg) {
  const CriticalLine& line = selected_line(cfg);
  const FlowPoints fp = classify_flow_points(line.family, std::max(4000, cfg.resolution), FlowSource::Closed);
  Table t{{"family", "kind", "theta1", "stability"}, {}};
  const std::string fam(family_name(line.family));
  for (const auto& z : fp.fixed)
    t.rows.push_back({fam, "fixed", format_number(z.theta), z.attractive ? "attractive" : "repulsive"});
  for (double u : fp.unstable) t.rows.push_back({fam, "unstable", format_number(u), "unstable"});
  return t;
}

Table wannier_table(const ScanConfig& cfg) {
  const CriticalLine& line = selected_line(cfg);
  std::optional<MulticriticalPoint> mc;
  if (cfg.theta1) {
    mc = find_multicritical(line.id, *cfg.theta1);
    if (!mc) throw ConfigError("--theta1 is not a multicritical angle of the selected line");
  } else {
    for (const auto& m : multicritical_points())
      if (transition_info(line, m).hosts_transition) {
        mc = m;
        break;
      }
  }
  if (!mc || !transition_info(line, *mc).hosts_transition) throw ConfigError("no transition-hosting point on this line");
  const double max_off = *std::max_element(cfg.offsets.begin(), cfg.offsets.end());
  const int side = default_side(line, *mc, max_off);
  const DecayLength src =
      mc->kind == Dispersion::Linear && line.high_symmetry() ? DecayLength::PeakHeight : DecayLength::OzWidth;

  Table t{{"offset", "theta1c", "k0", "source", "xi_c", "F_peak", "R", "lambda_re", "lambda_im", "lambda_abs"}, {}};
  for (double off : cfg.offsets) {
    const double th = mc->angles.theta1 + side * off;
    for (const auto& g : mc->closings) {
      if (!g.high_symmetry) continue;
      const CorrelationSeries s = wannier_correlation(line, th, g.k, cfg.r_max, src);
      for (std::size_t i = 0; i < s.R.size(); ++i) {
        t.rows.push_back({format_number(off), format_number(th), format_number(g.k),
                          src == DecayLength::OzWidth ? "oz_width" : "peak_height", format_number(s.xi_c),
                          format_number(s.F_peak), std::to_string(s.R[i]), format_number(s.lambda[i].real()),
                          format_number(s.lambda[i].imag()), format_number(std::abs(s.lambda[i]))});
      }
    }
  }
  return t;
}

Table velocity_table(const ScanConfig& cfg) {
  const CoinAngles a = selected_angles(cfg);
  const VelocityProfile p = velocity_profile(a, std::max(cfg.k_grid, 1024));
  Table t{{"k", "v_plus", "v_minus", "span_min", "span_max"}, {}};
  for (std::size_t i = 0; i < p.k.size(); ++i)
    t.rows.push_back({format_number(p.k[i]), na_or(p.v[i]), na_or(-p.v[i]), format_number(p.v_min),
                      format_number(p.v_max)});
  return t;
}

Table winding_trace_table(const ScanConfig& cfg) {
  std::vector<UnitVectorSample> tr;
  if (cfg.line) {
    if (!cfg.theta1) throw ConfigError("--line needs --theta1 to pick a point on the line");
    tr = winding_vector_trace(selected_line(cfg), *cfg.theta1, cfg.k_grid, cfg.delta);
  } else {
    tr = winding_vector_trace(selected_angles(cfg), cfg.k_grid);
  }
  Table t{{"k", "n2", "n3", "segment"}, {}};
  int seg = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (i > 0 && tr[i].segment_start) ++seg;
    t.rows.push_back({format_number(tr[i].k), format_number(tr[i].n2), format_number(tr[i].n3), std::to_string(seg)});
  }
  return t;
}

int run_command(const ScanConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    validate(cfg);
    set_worker_count(cfg.jobs);

    std::vector<std::pair<std::string, Table>> outputs;  // (tag, table); empty tag = main file
    json extra = json::object();
    int code = 0;

    if (cfg.command == "acceptance") {
      if (cfg.list) {
        for (const auto& c : acceptance_criteria()) out << c.id << ' ' << c.key << "  " << c.title << '\n';
        return 0;
      }
      const auto results = run_acceptance(cfg.only, out);
      Table t{{"id", "key", "passed", "seconds", "detail"}, {}};
      bool ok = true;
      for (const auto& r : results) {
        ok = ok && r.passed;
        std::string d = r.detail;
        std::replace(d.begin(), d.end(), ',', ';');
        t.rows.push_back({std::to_string(r.id), r.key, r.passed ? "1" : "0", format_number(r.seconds), d});
      }
      code = ok ? 0 : 1;
      if (cfg.output.empty()) return code;
      outputs.emplace_back("", std::move(t));
      extra["passed"] = ok;
    } else if (cfg.command == "phase-diagram") {
      outputs.emplace_back("", phase_diagram_table(cfg));
    } else if (cfg.command == "critical-scan") {
      outputs.emplace_back("", critical_scan_table(cfg));
    } else if (cfg.command == "exponents") {
      outputs.emplace_back("", exponents_table(cfg));
    } else if (cfg.command == "rg-flow") {
      outputs.emplace_back("", rg_flow_table(cfg));
      outputs.emplace_back("points", rg_points_table(cfg));
    } else if (cfg.command == "wannier") {
      outputs.emplace_back("", wannier_table(cfg));
    } else if (cfg.command == "velocity") {
      outputs.emplace_back("", velocity_table(cfg));
      const VelocityProfile p = velocity_profile(selected_angles(cfg), std::max(cfg.k_grid, 1024));
      extra["span"] = {p.v_min, p.v_max};
      extra["discontinuities"] = p.discontinuities;
    } else if (cfg.command == "winding-trace") {
      outputs.emplace_back("", winding_trace_table(cfg));
      std::vector<UnitVectorSample> tr =
          cfg.line ? winding_vector_trace(selected_line(cfg), *cfg.theta1, cfg.k_grid, cfg.delta)
                   : winding_vector_trace(selected_angles(cfg), cfg.k_grid);
      extra["loops"] = count_loops(tr);
    }

    if (cfg.output.empty()) {
      for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (i) out << '\n';
        write_table(outputs[i].second, cfg.format, out);
      }
      return code;
    }

    json files = json::array();
    for (const auto& [tag, table] : outputs) {
      const std::string path = tag.empty() ? cfg.output : sibling(cfg.output, tag);
      write_file(path, render(table, cfg.format));
      files.push_back({{"path", path}, {"rows", table.rows.size()}, {"columns", table.columns}});
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json m;
    m["tool"] = "tsqw";
    m["version"] = kToolVersion;
    m["config"] = config_json(cfg);
    m["wall_time_s"] = wall;
    m["tasks"] = json::array({{{"name", cfg.command}, {"status", code == 0 ? "ok" : "failed"}}});
    m["files"] = files;
    if (!extra.empty()) m["summary"] = extra;
    write_file(cfg.output + ".manifest.json", m.dump(2) + "\n");
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const FitRejected& e) {
    err << "fit failure: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace tsqw
