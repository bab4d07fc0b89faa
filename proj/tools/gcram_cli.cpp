// SPDX-License-Identifier: Apache-2.0
//
// gcram: bank generator, checker and explorer.
//
// Exit codes: 0 success, 1 usage error, 2 generation error, 3 DRC violations.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "gcram/gcram.hpp"

namespace fs = std::filesystem;
using namespace gcram;

namespace {

enum Exit { kOk = 0, kUsage = 1, kGeneration = 2, kDrc = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string tech_path;
  std::string workload_path;
  std::string gds_path;
  std::string out_dir = ".";
  std::vector<std::string> grid;
  std::vector<double> vt_sweep = {-0.1, -0.05, 0.0, 0.05, 0.1};
  double t_end = 0;
  unsigned threads = 0;
  bool csv = false;
  bool svg = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const Options& o, const std::string& name, std::string_view data) {
  fs::create_directories(o.out_dir);
  auto path = fs::path(o.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

void write_file(const Options& o, const std::string& name, const std::vector<uint8_t>& bytes) {
  write_file(o, name, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

MemoryConfig load_config(const Options& o) {
  if (o.config_path.empty()) throw UsageError("--config is required");
  std::vector<std::string> warnings;
  auto cfg = parse_config(read_file(o.config_path), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return cfg;
}

// --tech wins; otherwise tech_path is looked up next to the config, then in the bundled data.
Technology load_technology(const Options& o, const MemoryConfig* cfg) {
  if (!o.tech_path.empty()) {
    if (!fs::exists(o.tech_path)) throw UsageError("technology file '" + o.tech_path + "' not found");
    return load_tech_file(o.tech_path);
  }
  std::vector<fs::path> tries;
  if (cfg && !cfg->tech_path.empty()) {
    fs::path p(cfg->tech_path);
    if (p.is_absolute()) tries.push_back(p);
    else {
      tries.push_back(fs::path(o.config_path).parent_path() / p);
      tries.push_back(fs::path(GCRAM_DATA_DIR) / p);
      tries.push_back(fs::path(GCRAM_DATA_DIR) / (p.string() + ".tech"));
    }
  } else {
    tries.push_back(fs::path(GCRAM_DATA_DIR) / "generic45.tech");
  }
  for (const auto& p : tries)
    if (fs::is_regular_file(p)) return load_tech_file(p.string());
  throw UsageError("technology '" + (cfg ? cfg->tech_path : std::string("generic45")) + "' not found");
}

std::string findings_text(const std::vector<Finding>& fs) {
  std::ostringstream os;
  for (const auto& f : fs) os << to_string(f.kind) << " " << f.subckt << " " << f.net << ": " << f.message << "\n";
  return os.str();
}

std::string violations_text(const std::vector<Violation>& vs) {
  std::ostringstream os;
  for (const auto& v : vs) os << to_string(v) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------

int cmd_gen(const Options& o) {
  auto cfg = load_config(o);
  auto tech = load_technology(o, &cfg);
  auto d = build_bank(cfg, tech);
  auto findings = connectivity_check(d.top, d.circuits());
  auto viol = run_drc(d.layout, d.layouts, tech);
  write_file(o, "bank.sp", d.spice());
  write_file(o, "bank.gds", write_gds(d.top.name, d.layout, d.layouts));
  auto rep = analyze(d, tech);
  write_file(o, "analysis.txt", to_text(rep));
  if (o.csv) write_file(o, "analysis.csv", csv_header() + "\n" + to_csv_row(rep) + "\n");
  write_file(o, "connectivity.txt", findings_text(findings));
  write_file(o, "drc.txt", violations_text(viol));
  std::cout << d.top.name << ": " << findings.size() << " connectivity findings, " << viol.size()
            << " DRC violations\n";
  if (!findings.empty()) return kGeneration;
  return viol.empty() ? kOk : kDrc;
}

int cmd_spice(const Options& o) {
  auto cfg = load_config(o);
  auto tech = load_technology(o, &cfg);
  auto d = assemble_bank(cfg, tech);
  write_file(o, "bank.sp", d.spice());
  return kOk;
}

int cmd_gds(const Options& o) {
  auto cfg = load_config(o);
  auto tech = load_technology(o, &cfg);
  auto d = build_bank(cfg, tech);
  write_file(o, "bank.gds", write_gds(d.top.name, d.layout, d.layouts));
  return kOk;
}

// Top cell of a stream file: the one no other cell places.
const LayoutCell& gds_top(const LayoutLibrary& lib) {
  std::set<std::string> used;
  for (const auto& [n, c] : lib)
    for (const auto& p : c.placements) used.insert(p.cell);
  const LayoutCell* top = nullptr;
  for (const auto& [n, c] : lib)
    if (!used.count(n)) {
      if (top) throw UsageError("stream file has more than one top cell");
      top = &c;
    }
  if (!top) throw UsageError("stream file has no top cell");
  return *top;
}

int cmd_drc(const Options& o) {
  std::vector<Violation> viol;
  if (!o.gds_path.empty()) {
    auto tech = load_technology(o, nullptr);
    auto bytes = read_file(o.gds_path);
    auto g = read_gds(std::vector<uint8_t>(bytes.begin(), bytes.end()));
    LayoutLibrary lib;
    for (auto& c : g.cells) lib.emplace(c.name, c);
    viol = run_drc(gds_top(lib), lib, tech);
  } else {
    auto cfg = load_config(o);
    auto tech = load_technology(o, &cfg);
    auto d = build_bank(cfg, tech);
    viol = run_drc(d.layout, d.layouts, tech);
  }
  write_file(o, "drc.txt", violations_text(viol));
  std::cout << viol.size() << " DRC violations\n";
  return viol.empty() ? kOk : kDrc;
}

int cmd_analyze(const Options& o) {
  auto cfg = load_config(o);
  auto tech = load_technology(o, &cfg);
  auto rep = analyze(build_bank(cfg, tech), tech);
  write_file(o, "analysis.txt", to_text(rep));
  if (o.csv) write_file(o, "analysis.csv", csv_header() + "\n" + to_csv_row(rep) + "\n");
  std::cout << to_text(rep);
  return kOk;
}

int cmd_retention(const Options& o) {
  auto cfg = load_config(o);
  auto tech = load_technology(o, &cfg);
  if (!is_gain_cell(cfg.cell_variant)) throw UsageError("retention needs a gain-cell variant");
  auto setup = make_retention_setup(cfg, tech);
  auto r = retention_time(setup);
  double t_end = o.t_end > 0 ? o.t_end : (std::isfinite(r.seconds) && r.seconds > 0 ? 1.5 * r.seconds : 1.0);
  auto trace = apply_read_disturb(simulate_decay(setup, t_end), setup);
  auto curve = retention_curve(setup, o.vt_sweep);

  std::ostringstream rep;
  rep << "variant = " << to_string(cfg.cell_variant) << "\n"
      << "wwl_level_shifter = " << (cfg.level_shifted() ? "true" : "false") << "\n"
      << "write_vt_offset = " << text::exact(cfg.write_vt_offset) << " V\n"
      << "c_sn = " << text::exact(setup.c_sn) << " F\n"
      << "sense_threshold = " << text::exact(setup.sense_threshold) << " V\n"
      << "retention = " << text::exact(r.seconds) << " s\n"
      << "retention_one = " << text::exact(r.t_one) << " s\n"
      << "retention_zero = " << text::exact(r.t_zero) << " s\n"
      << "limiting_state = " << to_string(r.limiting) << "\n";
  for (const auto& e : trace.events) rep << "event " << e.label << " t = " << text::exact(e.time) << " s dv = " << text::exact(e.dv) << " V\n";
  write_file(o, "retention.txt", rep.str());
  write_file(o, "trace.txt", trace_to_text(trace));
  write_file(o, "retention_curve.csv", curve_to_csv(curve));
  if (o.csv) write_file(o, "trace.csv", trace_to_csv(trace));
  if (o.svg) {
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < trace.times.size(); ++i) pts.emplace_back(trace.times[i], trace.v_sn[i]);
    write_file(o, "trace.svg", line_plot_svg(pts, "time (s)", "storage node (V)"));
    write_file(o, "retention_curve.svg", line_plot_svg(curve, "write Vt offset (V)", "retention (s)", true));
  }
  std::cout << rep.str();
  return kOk;
}

std::vector<std::pair<int, int>> parse_grid(const std::vector<std::string>& items) {
  std::vector<std::pair<int, int>> out;
  for (const auto& s : items) {
    auto x = s.find_first_of("xX");
    auto a = text::to_int(std::string_view(s).substr(0, x));
    auto b = x == std::string::npos ? std::nullopt : text::to_int(std::string_view(s).substr(x + 1));
    if (!a || !b || *a < 1 || *b < 2) throw UsageError("bad --grid entry '" + s + "', expected WxN");
    out.emplace_back(static_cast<int>(*a), static_cast<int>(*b));
  }
  return out;
}

int cmd_shmoo(const Options& o) {
  MemoryConfig base;
  Technology tech;
  if (!o.config_path.empty()) {
    base = load_config(o);
    tech = load_technology(o, &base);
  } else {
    tech = load_technology(o, nullptr);
  }
  auto wpath = o.workload_path.empty() ? std::string(GCRAM_DATA_DIR) + "/workloads.csv" : o.workload_path;
  auto tasks = load_workloads(read_file(wpath));
  auto shapes = o.grid.empty() ? default_shapes() : parse_grid(o.grid);
  auto r = shmoo(make_grid(shapes, base), tasks, tech, o.threads);
  bool both = !o.csv && !o.svg;
  if (o.csv || both) write_file(o, "shmoo.csv", shmoo_to_csv(r));
  if (o.svg || both) write_file(o, "shmoo.svg", shmoo_svg(r));
  std::ostringstream best;
  best << "task_id,name,cache_level,word_size,num_words,bits\n";
  for (size_t j = 0; j < r.tasks.size(); ++j) {
    const auto& t = r.tasks[j];
    best << t.task_id << "," << t.name << "," << to_string(t.cache_level) << ",";
    if (auto i = select_optimal(r, j))
      best << r.configs[*i].word_size << "," << r.configs[*i].num_words << "," << r.configs[*i].bits() << "\n";
    else
      best << ",,\n";
  }
  write_file(o, "optimal.csv", best.str());
  std::cout << best.str();
  return kOk;
}

int cmd_sweep(const Options& o) {
  MemoryConfig base;
  Technology tech;
  if (!o.config_path.empty()) {
    base = load_config(o);
    tech = load_technology(o, &base);
  } else {
    base.word_size = 32;
    tech = load_technology(o, nullptr);
  }
  const CellVariant variants[] = {CellVariant::SI_SI_NN, CellVariant::SI_SI_NP, CellVariant::OS_OS,
                                  CellVariant::SRAM_6T};
  const int words[] = {8, 32, 128, 512};
  std::vector<MemoryConfig> cfgs;
  for (auto v : variants)
    for (int n : words) {
      auto c = base;
      c.word_size = 32;
      c.num_words = n;
      c.cell_variant = v;
      c.words_per_row.reset();
      cfgs.push_back(c);
    }
  std::vector<AnalysisReport> reps(cfgs.size());
  std::vector<size_t> findings(cfgs.size()), viol(cfgs.size());
  parallel_for(cfgs.size(), o.threads, [&](size_t i) {
    auto d = build_bank(cfgs[i], tech);
    findings[i] = connectivity_check(d.top, d.circuits()).size();
    viol[i] = run_drc(d.layout, d.layouts, tech).size();
    reps[i] = analyze(d, tech);
  });
  std::ostringstream all;
  all << "bits," << csv_header() << ",connectivity_findings,drc_violations\n";
  for (size_t i = 0; i < cfgs.size(); ++i)
    all << cfgs[i].bits() << "," << to_csv_row(reps[i]) << "," << findings[i] << "," << viol[i] << "\n";
  write_file(o, "sweep.csv", all.str());

  // gain cell against sram at each size
  std::ostringstream cmp;
  cmp << "variant,bits,area_ratio_vs_sram,array_efficiency,leakage_ratio_vs_sram,f_max_ratio_vs_sram\n";
  const size_t n = std::size(words), sram = 3 * n;
  for (size_t v = 0; v < 3; ++v)
    for (size_t k = 0; k < n; ++k) {
      const auto &g = reps[v * n + k], &s = reps[sram + k];
      cmp << to_string(variants[v]) << "," << cfgs[v * n + k].bits() << "," << text::exact(g.area_total / s.area_total)
          << "," << text::exact(g.array_efficiency) << "," << text::exact(g.p_leak / s.p_leak) << ","
          << text::exact(g.f_max / s.f_max) << "\n";
    }
  write_file(o, "comparison.csv", cmp.str());
  std::cout << cmp.str();
  size_t bad = 0;
  for (size_t i = 0; i < cfgs.size(); ++i) bad += findings[i];
  if (bad) return kGeneration;
  for (size_t i = 0; i < cfgs.size(); ++i)
    if (viol[i]) return kDrc;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gain-cell memory bank generator"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c, bool need_config) {
    auto* opt = c->add_option("--config", o.config_path, "Bank configuration file");
    if (need_config) opt->required();
    c->add_option("--tech", o.tech_path, "Technology file (overrides the config's tech_path)");
    c->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  };

  std::map<std::string, std::function<int(const Options&)>> handlers;
  auto add = [&](const std::string& name, const std::string& help, bool need_config,
                 std::function<int(const Options&)> fn) {
    auto* c = app.add_subcommand(name, help);
    common(c, need_config);
    handlers[name] = std::move(fn);
    return c;
  };

  auto* gen = add("gen", "Netlist, layout, checks and analysis report", true, cmd_gen);
  gen->add_flag("--csv", o.csv, "Also write analysis.csv");
  add("spice", "Write the SPICE netlist", true, cmd_spice);
  add("gds", "Write the GDSII layout", true, cmd_gds);
  auto* drc = add("drc", "Design-rule check a generated bank or a stream file", false, cmd_drc);
  drc->add_option("--gds", o.gds_path, "Check this GDSII file instead of generating");
  auto* an = add("analyze", "Area, timing, power report", true, cmd_analyze);
  an->add_flag("--csv", o.csv, "Also write analysis.csv");
  auto* ret = add("retention", "Storage-node decay trace and retention time", true, cmd_retention);
  ret->add_option("--t-end", o.t_end, "Trace length in seconds (default 1.5x retention)");
  ret->add_option("--vt-sweep", o.vt_sweep, "Write Vt offsets for the retention curve")->delimiter(',');
  ret->add_flag("--csv", o.csv, "Also write trace.csv");
  ret->add_flag("--svg", o.svg, "Also write SVG plots");
  auto* sh = add("shmoo", "Pass/fail grid of bank sizes against workload requirements", false, cmd_shmoo);
  sh->add_option("--workloads", o.workload_path, "Workload CSV (default: bundled example)");
  sh->add_option("--grid", o.grid, "Bank shapes WxN, comma separated")->delimiter(',');
  sh->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  sh->add_flag("--csv", o.csv, "Write only the CSV grid");
  sh->add_flag("--svg", o.svg, "Write only the SVG plot");
  auto* sw = add("sweep", "256 b to 16 Kb banks for every variant, with comparison tables", false, cmd_sweep);
  sw->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  try {
    for (auto* sub : app.get_subcommands()) return handlers.at(sub->get_name())(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGeneration;
  }
  return kUsage;
}
