#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "affdim/acceptance.hpp"
#include "affdim/covering.hpp"
#include "affdim/estimators.hpp"
#include "affdim/gallery.hpp"
#include "affdim/separation.hpp"
#include "affdim/symbolic_fibres.hpp"
#include "affdim/system_io.hpp"

using namespace affdim;
using nlohmann::json;

namespace {

constexpr int exit_validation = 2;
constexpr int exit_resource = 3;
constexpr int exit_acceptance = 4;

struct SystemChoice {
  std::string gallery;
  std::string file;

  void attach(CLI::App* cmd) {
    auto* g = cmd->add_option("-g,--gallery", gallery, "gallery system name");
    auto* f = cmd->add_option("-s,--system", file, "system definition JSON file");
    g->excludes(f);
  }
  IFSSystem load() const {
    if (!file.empty()) return load_system(file);
    if (!gallery.empty()) return gallery_get(gallery).system;
    throw ValidationError("choose a system with --gallery NAME or --system FILE");
  }
};

enum class Format { table, json, csv };

struct FormatChoice {
  bool json = false;
  bool csv = false;
  void attach(CLI::App* cmd) {
    auto* j = cmd->add_flag("--json", json, "machine-readable JSON");
    auto* c = cmd->add_flag("--csv", csv, "CSV table");
    j->excludes(c);
  }
  Format get() const { return json ? Format::json : csv ? Format::csv : Format::table; }
};

json estimate_json(const DimensionEstimate& e) {
  json out{{"value", e.value},
           {"method", to_string(e.method)},
           {"m_min", e.m_min},
           {"n_max", e.n_max},
           {"lower_bound_only", e.lower_bound_only},
           {"note", e.note}};
  if (e.theta) out["theta"] = *e.theta;
  out["trend"] = json::array();
  for (const auto& [x, y] : e.trend) out["trend"].push_back({x, y});
  out["residuals"] = e.residuals;
  json diag = json::object();
  for (const auto& [k, v] : e.diagnostics) diag[k] = v;
  out["diagnostics"] = diag;
  return out;
}

void print_estimate(const DimensionEstimate& e) {
  std::cout << "method            " << to_string(e.method) << '\n';
  if (e.theta) std::cout << "theta             " << *e.theta << '\n';
  std::cout << "estimate          " << std::setprecision(6) << e.value << (e.lower_bound_only ? "  (lower bound)" : "")
            << '\n';
  if (e.n_max > 0) std::cout << "scales            m >= " << e.m_min << ", n <= " << e.n_max << '\n';
  for (const auto& [k, v] : e.diagnostics) std::cout << std::left << std::setw(18) << k << ' ' << v << '\n';
  if (!e.note.empty()) std::cout << "note              " << e.note << '\n';
}

void print_matrix_csv(const ScalePairMatrix& matrix) {
  std::cout << "m,n,window_ix,window_iy,N,exponent\n";
  for (const auto& e : matrix.entries())
    std::cout << e.m << ',' << e.n << ',' << e.window.ix.get_str() << ',' << e.window.iy.get_str() << ',' << e.count
              << ',' << std::setprecision(10) << e.exponent << '\n';
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

Word parse_word(const std::string& text, std::size_t letters) {
  Word w;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const long v = std::stol(item);
    if (v < 1 || static_cast<std::size_t>(v) > letters)
      throw InvalidWordError("index " + item + " outside 1.." + std::to_string(letters));
    w.push_back(static_cast<std::uint32_t>(v - 1));
  }
  return w;
}

int run_gallery(const std::string& name, Format format) {
  const auto systems = name.empty() ? gallery_list() : std::vector<GallerySystem>{gallery_get(name)};
  if (format == Format::json) {
    json out = json::array();
    for (const auto& g : systems) {
      json known = json::array();
      for (const auto& k : g.known_values)
        known.push_back({{"quantity", k.quantity}, {"value", k.value}, {"expression", k.expression},
                         {"provenance", k.provenance}});
      out.push_back({{"name", g.name},
                     {"description", g.description},
                     {"system", system_to_json(g.system)},
                     {"known_values", known},
                     {"caveats", g.caveats}});
    }
    std::cout << (name.empty() ? out : out[0]).dump(2) << '\n';
    return 0;
  }
  if (format == Format::csv) {
    std::cout << "name,quantity,value,expression\n";
    for (const auto& g : systems)
      for (const auto& k : g.known_values)
        std::cout << g.name << ',' << k.quantity << ',' << std::setprecision(12) << k.value << ",\"" << k.expression
                  << "\"\n";
    return 0;
  }
  for (const auto& g : systems) {
    std::cout << g.name << "  (" << g.system.size() << " maps, theta0 " << std::setprecision(4) << g.system.theta0()
              << ")\n  " << g.description << '\n';
    for (const auto& k : g.known_values)
      std::cout << "    " << std::left << std::setw(28) << k.quantity << std::setprecision(6) << k.value << "  "
                << k.expression << '\n';
    if (!g.caveats.empty()) std::cout << "  caveat: " << g.caveats << '\n';
    if (!name.empty()) std::cout << system_to_json(g.system).dump(2) << '\n';
  }
  return 0;
}

struct DimArgs {
  std::string method = "box";
  std::optional<double> theta;
  std::optional<int> depth_m;
  std::optional<int> depth_n;
  std::size_t prefix_depth = 2;
  std::size_t fibre_depth = 8;
  std::size_t windows = 0;
};

int run_dim(const IFSSystem& system, const DimArgs& a, Format format) {
  const auto source = attractor_source(system);
  ScalePairMatrix matrix;
  DimensionEstimate est;
  auto need_theta = [&]() {
    if (!a.theta) throw ValidationError("--theta is required for method " + a.method);
    return *a.theta;
  };
  SpectrumOptions spec;
  spec.sampling.windows = a.windows;
  if (a.depth_m) spec.gap_min = *a.depth_m;
  if (a.depth_n) spec.gap_max = *a.depth_n;
  if (a.method == "box") {
    est = box_dimension_estimate(*source, a.depth_m.value_or(4), a.depth_n.value_or(10));
  } else if (a.method == "assouad") {
    AssouadOptions opt;
    opt.m_max = a.depth_m.value_or(6);
    if (a.depth_n) opt.gap_max = *a.depth_n - opt.m_max;
    opt.sampling.windows = a.windows;
    auto r = assouad_estimate(*source, opt);
    est = r.estimate;
    matrix = std::move(r.matrix);
  } else if (a.method == "spectrum") {
    est = spectrum_estimate(*source, need_theta(), spec, enumeration_cap(), &matrix);
  } else if (a.method == "qa") {
    const auto grid = quasi_theta_grid(system.theta0());
    est = quasi_assouad_estimate(*source, grid, spec);
  } else if (a.method == "formula-a" || a.method == "formula-as") {
    FormulaOptions opt;
    opt.prefix_depth = a.prefix_depth;
    opt.fibre_depth = a.fibre_depth;
    est = a.method == "formula-a" ? formula_dimA(system, opt) : formula_dimAs(system, need_theta(), opt);
  } else {
    throw ValidationError("unknown method " + a.method);
  }
  if (format == Format::json) {
    json out = estimate_json(est);
    if (!matrix.entries().empty()) {
      out["scale_pairs"] = json::array();
      for (const auto& e : matrix.entries())
        out["scale_pairs"].push_back({{"m", e.m}, {"n", e.n}, {"window_ix", e.window.ix.get_str()},
                                      {"window_iy", e.window.iy.get_str()}, {"N", e.count}, {"exponent", e.exponent}});
    }
    std::cout << out.dump(2) << '\n';
  } else if (format == Format::csv) {
    if (!matrix.entries().empty()) {
      print_matrix_csv(matrix);
    } else {
      // Regression methods have no window matrix; emit the fitted series.
      std::cout << "x,y\n";
      for (const auto& [x, y] : est.trend) std::cout << x << ',' << std::setprecision(10) << y << '\n';
    }
  } else {
    print_estimate(est);
  }
  return 0;
}

int run_spectrum(const IFSSystem& system, const std::string& thetas, bool formula, std::size_t windows, Format format) {
  const auto source = attractor_source(system);
  SpectrumOptions opt;
  opt.sampling.windows = windows;
  const auto list = parse_list(thetas);
  if (format == Format::csv) std::cout << "theta,estimate,formula\n";
  json out = json::array();
  if (format == Format::table) std::cout << "theta    estimate   formula\n";
  for (double t : list) {
    const double e = spectrum_estimate(*source, t, opt).value;
    std::optional<double> f;
    if (formula && t >= system.theta0()) f = formula_dimAs(system, t).value;
    if (format == Format::json) {
      out.push_back({{"theta", t}, {"estimate", e}, {"formula", f ? json(*f) : json(nullptr)}});
    } else if (format == Format::csv) {
      std::cout << t << ',' << e << ',' << (f ? std::to_string(*f) : "") << '\n';
    } else {
      std::cout << std::fixed << std::setprecision(3) << t << "    " << std::setprecision(4) << e << "     "
                << (f ? std::to_string(*f) : "-") << '\n';
    }
  }
  if (format == Format::json) std::cout << out.dump(2) << '\n';
  return 0;
}

json pair_json(const WordPair& p) { return {word_to_json(p.first), word_to_json(p.second)}; }

int run_separation(const IFSSystem& system, const std::string& exponents, std::size_t overlap_depth,
                   std::size_t delta_max, const std::string& csv) {
  const auto projected = system.projected();
  std::vector<int> exps;
  if (exponents.empty()) {
    exps = default_r_exponents(system);
  } else {
    for (double e : parse_list(exponents)) exps.push_back(static_cast<int>(e));
  }
  const auto report = wsc_diagnostic(projected, exps, overlap_depth);
  std::vector<std::pair<std::size_t, EscDelta>> deltas;
  for (std::size_t n = 1; n <= delta_max; ++n) deltas.emplace_back(n, esc_delta(projected, n));
  if (csv == "tr") {
    std::cout << "r,t_r_upper,t_r_lower,distinct_maps\n";
    for (const auto& s : report.samples)
      std::cout << std::setprecision(12) << to_double(s.r) << ',' << s.upper << ',' << s.lower << ','
                << s.distinct_maps << '\n';
    return 0;
  }
  if (csv == "delta") {
    std::cout << "n,delta\n";
    for (const auto& [n, d] : deltas)
      std::cout << n << ',' << (d.delta ? std::to_string(to_double(*d.delta)) : "inf") << '\n';
    return 0;
  }
  if (!csv.empty()) throw ValidationError("--csv takes tr or delta");
  json out{{"verdict", to_string(report.verdict)}, {"caveat", report.caveat}};
  out["samples"] = json::array();
  for (const auto& s : report.samples)
    out["samples"].push_back({{"r", to_string(s.r)}, {"t_r_upper", s.upper}, {"t_r_lower", s.lower},
                              {"distinct_maps", s.distinct_maps}});
  if (report.witness) {
    out["witness"] = pair_json(*report.witness);
    out["witness_level"] = *report.witness_level;
    out["witness_is_exact_overlap"] = report.witness_is_exact_overlap;
  }
  out["delta"] = json::array();
  for (const auto& [n, d] : deltas) {
    json row{{"n", n}, {"delta", d.delta ? json(to_string(*d.delta)) : json(nullptr)}};
    if (d.witness) row["witness"] = pair_json(*d.witness);
    out["delta"].push_back(row);
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_fibre(const IFSSystem& system, const std::string& prefix_text, std::size_t depth, bool anchor, bool estimate,
              Format format) {
  if (prefix_text.empty()) throw ValidationError("--prefix is required (comma-separated, 1-based)");
  OmegaPrefix prefix = make_prefix(system, parse_word(prefix_text, system.size()));
  if (depth > prefix.size()) prefix = extend_periodic(system, prefix, depth);
  const IntervalUnion X = anchor ? IntervalUnion::point(0) : IntervalUnion::unit();
  const auto set = fibre_approximant(system, prefix, X);
  json out = fibre_to_json(prefix.indices, prefix.size(), set);
  out["bound_to_limit"] = to_string(fibre_limit_bound(system, prefix.size(), X));
  std::optional<DimensionEstimate> est;
  if (estimate) {
    est = fibre_dimension(system, prefix, prefix.size(), FibreQuery{FibreKind::box, 0.9});
    out["box_estimate"] = estimate_json(*est);
  }
  if (format == Format::json) {
    std::cout << out.dump(2) << '\n';
  } else if (format == Format::csv) {
    std::cout << "lo,hi\n";
    for (const auto& iv : set.intervals()) std::cout << to_string(iv.lo) << ',' << to_string(iv.hi) << '\n';
  } else {
    std::cout << "prefix " << format_word(prefix.indices) << ", " << set.size() << " intervals, measure "
              << to_double(set.measure()) << ", p_H to the limit <= " << to_string(fibre_limit_bound(system, prefix.size(), X))
              << '\n';
    std::size_t shown = 0;
    for (const auto& iv : set.intervals()) {
      if (++shown > 20) {
        std::cout << "  ...\n";
        break;
      }
      std::cout << "  [" << to_string(iv.lo) << ", " << to_string(iv.hi) << "]\n";
    }
    if (est) std::cout << "box estimate " << est->value << '\n';
  }
  return 0;
}

int run_cover(const IFSSystem& system, int level, const std::string& csv, const std::string& rle, const std::string& pgm) {
  if (level < 1 || level > 31) throw DomainError("cover level must lie in 1..31");
  const auto cover = attractor_cover(system, pow2(-level));
  const auto grid = rasterize(cover, level);
  auto open = [](const std::string& path, bool binary) {
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw ValidationError("cannot write " + path);
    return f;
  };
  if (!csv.empty()) {
    auto f = open(csv, false);
    write_cells_csv(f, grid);
  }
  if (!rle.empty()) {
    auto f = open(rle, true);
    write_cells_rle(f, grid);
  }
  if (!pgm.empty()) {
    auto f = open(pgm, true);
    write_pgm(f, grid);
  }
  std::cout << "level " << level << ": " << cover.rects.size() << " rectangles, " << grid.size() << " occupied cells\n";
  return 0;
}

int run_accept(const std::string& budget, double tolerance_scale, const std::vector<int>& only, bool as_json) {
  AcceptanceOptions opt;
  if (budget == "small") {
    opt.budget = Budget::small;
  } else if (budget == "full") {
    opt.budget = Budget::full;
  } else {
    throw ValidationError("--budget takes small or full");
  }
  opt.tolerance_scale = tolerance_scale;
  opt.only = only;
  const auto report = run_acceptance(opt);
  if (as_json) {
    std::cout << to_json(report).dump(2) << '\n';
  } else {
    std::cout << format_report(report);
    std::cout << (report.all_passed() ? "all criteria passed\n" : "some criteria failed\n");
  }
  return report.all_passed() ? 0 : exit_acceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension estimates for dominated rectangular self-affine sets"};
  app.require_subcommand(1);

  auto* gallery = app.add_subcommand("gallery", "list the example systems and their known values");
  std::string gallery_name;
  FormatChoice gallery_fmt;
  gallery->add_option("name", gallery_name, "show one system in full");
  gallery_fmt.attach(gallery);

  auto* dim = app.add_subcommand("dim", "estimate a dimension of the attractor");
  SystemChoice dim_sys;
  FormatChoice dim_fmt;
  DimArgs dim_args;
  dim_sys.attach(dim);
  dim_fmt.attach(dim);
  dim->add_option("--method", dim_args.method, "box|assouad|spectrum|qa|formula-a|formula-as")
      ->check(CLI::IsMember({"box", "assouad", "spectrum", "qa", "formula-a", "formula-as"}));
  dim->add_option("--theta", dim_args.theta, "spectrum parameter in (0,1)");
  dim->add_option("--depth-m", dim_args.depth_m, "coarsest level (box), largest window level (assouad), smallest gap (spectrum)");
  dim->add_option("--depth-n", dim_args.depth_n, "finest level (box, assouad), largest gap (spectrum)");
  dim->add_option("--prefix-depth", dim_args.prefix_depth, "prefix length for the fibre maximum");
  dim->add_option("--fibre-depth", dim_args.fibre_depth, "fibre approximant depth");
  dim->add_option("--windows", dim_args.windows, "windows sampled per scale (0: default)");

  auto* spectrum = app.add_subcommand("spectrum", "Assouad spectrum estimates over a theta list");
  SystemChoice spec_sys;
  FormatChoice spec_fmt;
  std::string spec_thetas = "0.5,0.6,0.7,0.8,0.9";
  bool spec_formula = false;
  std::size_t spec_windows = 0;
  spec_sys.attach(spectrum);
  spec_fmt.attach(spectrum);
  spectrum->add_option("--thetas", spec_thetas, "comma-separated theta values");
  spectrum->add_flag("--formula", spec_formula, "also evaluate the spectrum formula where theta >= theta0");
  spectrum->add_option("--windows", spec_windows, "windows sampled per scale (0: default)");

  auto* separation = app.add_subcommand("separation", "t_r growth, overlap witness and Delta_n of the projection");
  SystemChoice sep_sys;
  std::string sep_exponents, sep_csv;
  std::size_t sep_overlap = 6, sep_delta = 6;
  sep_sys.attach(separation);
  separation->add_option("--exponents", sep_exponents, "r = alpha_max^e for these e (comma-separated)");
  separation->add_option("--overlap-depth", sep_overlap, "exact-overlap search depth");
  separation->add_option("--delta-max", sep_delta, "compute Delta_n for n = 1..this");
  separation->add_option("--csv", sep_csv, "tr or delta: CSV instead of JSON")->check(CLI::IsMember({"tr", "delta"}));

  auto* fibre = app.add_subcommand("fibre", "symbolic fibre approximant along a prefix");
  SystemChoice fib_sys;
  FormatChoice fib_fmt;
  std::string fib_prefix;
  std::size_t fib_depth = 0;
  bool fib_anchor = false, fib_estimate = false;
  fib_sys.attach(fibre);
  fib_fmt.attach(fibre);
  fibre->add_option("--prefix", fib_prefix, "generator word, 1-based, comma-separated");
  fibre->add_option("--depth", fib_depth, "extend the prefix periodically to this length");
  fibre->add_flag("--anchor", fib_anchor, "use X = {0} instead of [0,1]");
  fibre->add_flag("--estimate", fib_estimate, "add a box-dimension estimate of the fibre");

  auto* cover = app.add_subcommand("cover", "rasterize the cylinder cover at 2^-level");
  SystemChoice cov_sys;
  int cov_level = 8;
  std::string cov_csv, cov_rle, cov_pgm;
  cov_sys.attach(cover);
  cover->add_option("--level", cov_level, "grid level n (cells of side 2^-n)");
  cover->add_option("--csv", cov_csv, "write occupied cells as CSV");
  cover->add_option("--rle", cov_rle, "write occupied cells as run-length binary");
  cover->add_option("--pgm", cov_pgm, "write a PGM bitmap");

  auto* accept = app.add_subcommand("accept", "run the acceptance suite");
  std::string acc_budget = "small";
  double acc_scale = 1.0;
  std::vector<int> acc_only;
  bool acc_json = false;
  accept->add_option("--budget", acc_budget, "small or full")->check(CLI::IsMember({"small", "full"}));
  accept->add_option("--tolerance-scale", acc_scale, "multiply every tolerance (0 forces failures)");
  accept->add_option("--only", acc_only, "criterion ids to run");
  accept->add_flag("--json", acc_json, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_validation;
  }

  try {
    if (*gallery) return run_gallery(gallery_name, gallery_fmt.get());
    if (*dim) return run_dim(dim_sys.load(), dim_args, dim_fmt.get());
    if (*spectrum) return run_spectrum(spec_sys.load(), spec_thetas, spec_formula, spec_windows, spec_fmt.get());
    if (*separation) return run_separation(sep_sys.load(), sep_exponents, sep_overlap, sep_delta, sep_csv);
    if (*fibre) return run_fibre(fib_sys.load(), fib_prefix, fib_depth, fib_anchor, fib_estimate, fib_fmt.get());
    if (*cover) return run_cover(cov_sys.load(), cov_level, cov_csv, cov_rle, cov_pgm);
    if (*accept) return run_accept(acc_budget, acc_scale, acc_only, acc_json);
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return exit_resource;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: malformed number: " << e.what() << '\n';
    return exit_validation;
  }
  return 0;
}
