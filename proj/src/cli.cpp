#include "spdgeo/cli.hpp"

#include "spdgeo/analysis.hpp"
#include "spdgeo/geometry.hpp"
#include "spdgeo/io.hpp"
#include "spdgeo/means.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace spdgeo::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> default_t_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(i / 20.0);
  return g;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) return default_t_grid();
  std::vector<double> g;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      g.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw InvalidArgument("invalid t-grid value '" + item + "'");
    }
  }
  if (g.empty()) throw InvalidArgument("empty t-grid");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= 0.0 && g[i] <= 1.0)) throw InvalidArgument("t-grid values must lie in [0, 1]");
    if (i > 0 && g[i] < g[i - 1]) throw InvalidArgument("t-grid must be sorted");
  }
  return g;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create directory '" + dir.string() + "'");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

const char* extension(const AnyMatrix& m) {
  return std::holds_alternative<SparseSpd>(m) ? ".mtx" : ".json";
}

double log_det(const AnyMatrix& m) {
  return std::visit([](const auto& x) { return x.log_det(); }, m);
}

template <typename T>
std::vector<T> all_of_kind(const std::vector<AnyMatrix>& ms) {
  std::vector<T> out;
  for (const auto& m : ms) {
    if (!std::holds_alternative<T>(m)) {
      throw InvalidArgument("input files mix dense and sparse matrices");
    }
    out.push_back(std::get<T>(m));
  }
  return out;
}

DenseSpd as_dense(const AnyMatrix& m) {
  if (const auto* d = std::get_if<DenseSpd>(&m)) return *d;
  return std::get<SparseSpd>(m).densify();
}

nlohmann::ordered_json report_json(const SparsityReport& r) {
  nlohmann::ordered_json j;
  j["out_of_pattern"] = r.out_of_pattern;
  j["nnz"] = r.nnz;
  j["fill_ratio"] = r.fill_ratio;
  return j;
}

template <typename M>
nlohmann::ordered_json mean_json(const std::string& kind, const MeanReport<M>& r) {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["cycles"] = r.cycles;
  j["refine_steps"] = r.refine_steps;
  j["final_gap"] = r.final_gap;
  j["converged"] = r.converged;
  return j;
}

// ---------------------------------------------------------------------------

int cmd_dist(const std::string& metric, const std::string& fx, const std::string& fy, double tol,
             std::ostream& out) {
  const AnyMatrix x = read_matrix(fx);
  const AnyMatrix y = read_matrix(fy);
  if (x.index() != y.index()) throw InvalidArgument("dist: inputs must be both dense or both sparse");
  double d = 0.0;
  if (metric == "thompson" && std::holds_alternative<SparseSpd>(x)) {
    KrylovOptions opts;
    opts.tol = tol;
    d = dist_thompson(std::get<SparseSpd>(x), std::get<SparseSpd>(y), opts);
  } else {
    const DenseSpd dx = as_dense(x);
    const DenseSpd dy = as_dense(y);
    if (metric == "riemannian") {
      d = dist_riemannian(dx, dy);
    } else if (metric == "hilbert") {
      d = dist_hilbert(dx, dy);
    } else if (metric == "thompson") {
      d = dist_thompson(dx, dy);
    } else {
      throw InvalidArgument("unknown metric '" + metric + "'");
    }
  }
  // Below the printed resolution the value is rounding noise.
  if (std::abs(d) < 5e-13) d = 0.0;
  out << fmt12(d) << "\n";
  return kOk;
}

int cmd_interpolate(const std::string& kind_name, const std::string& fx, const std::string& fy,
                    const std::string& grid_text, const fs::path& out_dir, std::ostream& out) {
  const GeodesicKind kind = parse_geodesic_kind(kind_name);
  const std::vector<double> grid = parse_grid(grid_text);
  const AnyMatrix x = read_matrix(fx);
  const AnyMatrix y = read_matrix(fy);
  if (x.index() != y.index()) {
    throw InvalidArgument("interpolate: inputs must be both dense or both sparse");
  }
  make_dir(out_dir);

  std::ostringstream csv;
  csv << "t,log_det\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    AnyMatrix m = [&]() -> AnyMatrix {
      if (std::holds_alternative<SparseSpd>(x) && kind != GeodesicKind::Riemannian) {
        const auto& sx = std::get<SparseSpd>(x);
        const auto& sy = std::get<SparseSpd>(y);
        if (kind == GeodesicKind::Euclidean) return geodesic_euclidean(sx, sy, t);
        return geodesic_star(sx, sy, t);
      }
      return geodesic(kind, as_dense(x), as_dense(y), t);
    }();
    char name[32];
    std::snprintf(name, sizeof name, "interp_%03zu", i);
    write_matrix(m, out_dir / (std::string(name) + extension(m)));
    csv << fmt12(t) << "," << fmt12(log_det(m)) << "\n";
  }
  write_text(out_dir / "det.csv", csv.str());
  out << "wrote " << grid.size() << " matrices and det.csv to " << out_dir.string() << "\n";
  return kOk;
}

int cmd_mean(const std::string& kind, const std::vector<std::string>& files, double tol,
             long max_cycles, const fs::path& out_path, std::string report_path,
             std::ostream& out) {
  if (files.empty()) throw InvalidArgument("mean: at least one input file required");
  std::vector<AnyMatrix> ms;
  for (const auto& f : files) ms.push_back(read_matrix(f));
  const bool sparse = std::holds_alternative<SparseSpd>(ms[0]);
  if (report_path.empty()) report_path = out_path.string() + ".report.json";

  nlohmann::ordered_json rep;
  if (kind == "inductive") {
    InductiveOptions opts;
    opts.tol = tol;
    opts.max_cycles = max_cycles;
    if (sparse) {
      const auto r = inductive_mean(all_of_kind<SparseSpd>(ms), std::nullopt, opts);
      write_matrix(r.result, out_path);
      rep = mean_json(kind, r);
    } else {
      const auto r = inductive_mean(all_of_kind<DenseSpd>(ms), std::nullopt, opts);
      write_matrix(r.result, out_path);
      rep = mean_json(kind, r);
    }
  } else if (kind == "karcher") {
    if (sparse) {
      (void)all_of_kind<SparseSpd>(ms);
    } else {
      (void)all_of_kind<DenseSpd>(ms);
    }
    std::vector<DenseSpd> ds;
    for (const auto& m : ms) ds.push_back(as_dense(m));
    KarcherOptions opts;
    opts.tol = tol;
    opts.max_iter = max_cycles;
    const auto r = karcher_mean(ds, opts);
    write_matrix(r.result, out_path);
    rep = mean_json(kind, r);
  } else if (kind == "arithmetic") {
    if (sparse) {
      write_matrix(arithmetic_mean(all_of_kind<SparseSpd>(ms)), out_path);
    } else {
      write_matrix(arithmetic_mean(all_of_kind<DenseSpd>(ms)), out_path);
    }
    rep["kind"] = kind;
    rep["cycles"] = 0;
    rep["refine_steps"] = 0;
    rep["final_gap"] = 0.0;
    rep["converged"] = true;
  } else {
    throw InvalidArgument("unknown mean kind '" + kind + "'");
  }
  write_text(report_path, rep.dump(2) + "\n");
  out << "wrote " << out_path.string() << " and " << report_path << "\n";
  return kOk;
}

int cmd_gen(long n, std::uint64_t seed, bool unit_det, bool sparse, double density,
            const fs::path& out_path, std::ostream& out) {
  if (n < 1) throw InvalidArgument("gen: --n must be >= 1");
  if (sparse) {
    write_matrix(random_sparse_spd(n, density, seed), out_path);
  } else {
    write_matrix(random_spd(n, seed, unit_det), out_path);
  }
  out << "wrote " << out_path.string() << "\n";
  return kOk;
}

int cmd_exp_shrinkage(long n, long count, std::uint64_t seed, const std::string& grid_text,
                      const fs::path& out_path, std::ostream& out) {
  if (n < 1 || count < 1) throw InvalidArgument("exp-shrinkage: need n >= 1 and count >= 1");
  const std::vector<double> grid = parse_grid(grid_text);
  std::ostringstream csv;
  csv << "pair_id,t,log_det_euclid,log_det_riem,log_det_star\n";
  for (long p = 0; p < count; ++p) {
    const DenseSpd x = random_spd(n, derive_seed(seed, 2 * static_cast<std::uint64_t>(p)), true);
    const DenseSpd y =
        random_spd(n, derive_seed(seed, 2 * static_cast<std::uint64_t>(p) + 1), true);
    for (double t : grid) {
      csv << p << "," << fmt12(t) << "," << fmt12(geodesic_euclidean(x, y, t).log_det()) << ","
          << fmt12(geodesic_riemannian(x, y, t).log_det()) << ","
          << fmt12(geodesic_star(x, y, t).log_det()) << "\n";
    }
  }
  write_text(out_path, csv.str());
  out << "wrote " << count * static_cast<long>(grid.size()) << " rows to " << out_path.string()
      << "\n";
  return kOk;
}

int cmd_exp_midpoint(long n, long count, std::uint64_t seed, double r_max,
                     const fs::path& out_path, std::ostream& out) {
  if (n < 2 || count < 1) throw InvalidArgument("exp-midpoint: need n >= 2 and count >= 1");
  const auto un = static_cast<std::size_t>(n);
  std::ostringstream csv;
  csv << "r,f,bound,marker\n";
  long violations = 0;
  auto emit = [&](double r, const Spectrum& s, int marker) {
    const MidpointReport rep = midpoint_distance(s);
    const double bound = r > 0.0 ? midpoint_distance_bound(un, r) / r : 0.0;
    if (rep.f > bound + 1e-9) ++violations;
    csv << fmt12(r) << "," << fmt12(rep.f) << "," << fmt12(bound) << "," << marker << "\n";
  };
  for (const auto& s : sample_spectra_over_r(un, r_max, static_cast<std::size_t>(count), seed)) {
    emit(s.r, s.spec, 0);
  }
  // The bound is attained at (e^{-r}, 1, ..., 1, e^{r}).
  const double rm = std::min(2.0, r_max);
  std::vector<double> marker(un, 1.0);
  marker.front() = std::exp(-rm);
  marker.back() = std::exp(rm);
  emit(rm, Spectrum(marker), 1);

  write_text(out_path, csv.str());
  out << "wrote " << count + 1 << " rows to " << out_path.string() << "; bound violations: "
      << violations << "\n";
  return kOk;
}

int cmd_exp_sparsity(long n, long k, double density, std::uint64_t seed, double tol,
                     const fs::path& out_dir, std::ostream& out) {
  if (n < 2 || k < 1) throw InvalidArgument("exp-sparsity: need n >= 2 and k >= 1");
  make_dir(out_dir);
  InductiveOptions iopts;
  iopts.tol = tol;
  nlohmann::ordered_json rep;

  auto densify_all = [](const std::vector<SparseSpd>& ys) {
    std::vector<DenseSpd> ds;
    for (const auto& y : ys) ds.push_back(y.densify());
    return ds;
  };
  auto scenario = [&](const std::string& name, const std::vector<SparseSpd>& ys,
                      const SparsityPattern& reference) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      write_matrix(ys[j], out_dir / (name + "_input_" + std::to_string(j) + ".mtx"));
    }
    const auto ind = inductive_mean(ys, std::nullopt, iopts);
    const auto kar = karcher_mean(densify_all(ys));
    write_matrix(ind.result, out_dir / (name + "_inductive.mtx"));
    write_matrix(kar.result, out_dir / (name + "_karcher.json"));
    nlohmann::ordered_json s;
    s["reference_fill"] =
        static_cast<double>(reference.size()) / (static_cast<double>(n) * static_cast<double>(n));
    s["inductive"] = mean_json("inductive", ind);
    s["inductive"]["sparsity"] = report_json(sparsity_report(ind.result, reference));
    s["karcher"] = mean_json("karcher", kar);
    s["karcher"]["sparsity"] = report_json(sparsity_report(kar.result, reference));
    rep[name] = s;
  };

  {
    const SparsityPattern pattern = random_pattern(n, density, seed);
    std::vector<SparseSpd> ys;
    for (long j = 0; j < k; ++j) {
      ys.push_back(random_sparse_spd_on(n, pattern, derive_seed(seed, 10 + j)));
    }
    scenario("same_pattern", ys, pattern);
  }
  {
    std::vector<SparseSpd> ys;
    SparsityPattern uni;
    for (long j = 0; j < k; ++j) {
      ys.push_back(random_sparse_spd(n, density, derive_seed(seed, 100 + j)));
      uni = pattern_union(uni, ys.back().pattern());
    }
    scenario("distinct_pattern", ys, uni);
  }
  write_text(out_dir / "report.json", rep.dump(2) + "\n");
  out << "wrote report.json and matrices to " << out_dir.string() << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thompson, Hilbert and affine-invariant geometry of SPD matrices"};
  app.require_subcommand(1);

  std::uint64_t seed = 7;
  long n = 3;
  long count = 1000;
  std::string out_path;

  // dist
  std::string metric, fx, fy;
  double dist_tol = 1e-10;
  auto* dist = app.add_subcommand("dist", "distance between two matrices");
  dist->add_option("metric", metric, "riemannian | hilbert | thompson")
      ->required()
      ->check(CLI::IsMember({"riemannian", "hilbert", "thompson"}));
  dist->add_option("x", fx, "first matrix file")->required();
  dist->add_option("y", fy, "second matrix file")->required();
  dist->add_option("--tol", dist_tol, "Lanczos tolerance for sparse inputs")->capture_default_str();

  // interpolate
  std::string kind, grid_text;
  auto* interp = app.add_subcommand("interpolate", "sample a geodesic and log-determinants");
  interp->add_option("kind", kind, "euclidean | riemannian | star")
      ->required()
      ->check(CLI::IsMember({"euclidean", "riemannian", "star", "thompson"}));
  interp->add_option("x", fx, "start matrix file")->required();
  interp->add_option("y", fy, "end matrix file")->required();
  interp->add_option("--t-grid", grid_text, "comma-separated t values (default 0,0.05,...,1)");
  interp->add_option("--out", out_path, "output directory")->required();

  // mean
  std::string mean_kind, report_path;
  std::vector<std::string> files;
  double mean_tol = 1e-8;
  long max_cycles = 100000;
  auto* mean = app.add_subcommand("mean", "mean of several matrices");
  mean->add_option("kind", mean_kind, "inductive | karcher | arithmetic")
      ->required()
      ->check(CLI::IsMember({"inductive", "karcher", "arithmetic"}));
  mean->add_option("files", files, "input matrix files")->required();
  mean->add_option("--tol", mean_tol, "stopping tolerance")->capture_default_str();
  mean->add_option("--max-cycles", max_cycles, "iteration cap")->capture_default_str();
  mean->add_option("--out", out_path, "output matrix file")->required();
  mean->add_option("--report", report_path, "report JSON path (default <out>.report.json)");

  // gen
  bool unit_det = false, sparse = false;
  double density = 0.02;
  auto* gen = app.add_subcommand("gen", "random SPD matrix to file");
  gen->add_option("--n", n, "dimension")->capture_default_str();
  gen->add_option("--seed", seed, "random seed")->capture_default_str();
  gen->add_flag("--unit-det", unit_det, "normalize to determinant 1");
  gen->add_flag("--sparse", sparse, "sparse diagonally dominant matrix (Matrix Market)");
  gen->add_option("--density", density, "off-diagonal density for --sparse")->capture_default_str();
  gen->add_option("--out", out_path, "output file")->required();

  // exp-shrinkage
  auto* shrink = app.add_subcommand("exp-shrinkage", "log-determinants along three geodesics");
  shrink->add_option("--n", n, "dimension")->capture_default_str();
  shrink->add_option("--count", count, "number of unit-determinant pairs")->capture_default_str();
  shrink->add_option("--seed", seed, "random seed")->capture_default_str();
  shrink->add_option("--t-grid", grid_text, "comma-separated t values (default 0,0.05,...,1)");
  shrink->add_option("--out", out_path, "output CSV")->required();

  // exp-midpoint
  double r_max = 100.0;
  long mid_count = 100000;
  long mid_n = 4;
  auto* mid = app.add_subcommand("exp-midpoint", "normalized midpoint distance f against r");
  mid->add_option("--n", mid_n, "dimension")->capture_default_str();
  mid->add_option("--count", mid_count, "number of sampled spectra")->capture_default_str();
  mid->add_option("--seed", seed, "random seed")->capture_default_str();
  mid->add_option("--r-max", r_max, "r is drawn uniformly from (0, r-max]")->capture_default_str();
  mid->add_option("--out", out_path, "output CSV")->required();

  // exp-sparsity
  long sp_n = 200;
  long sp_k = 5;
  double sp_tol = 1e-8;
  auto* spars = app.add_subcommand("exp-sparsity", "sparsity of inductive vs Karcher means");
  spars->add_option("--n", sp_n, "dimension")->capture_default_str();
  spars->add_option("--k", sp_k, "number of matrices")->capture_default_str();
  spars->add_option("--density", density, "off-diagonal density")->capture_default_str();
  spars->add_option("--seed", seed, "random seed")->capture_default_str();
  spars->add_option("--tol", sp_tol, "inductive mean tolerance")->capture_default_str();
  spars->add_option("--out", out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  bool sparsity_cmd = false;
  try {
    if (dist->parsed()) return cmd_dist(metric, fx, fy, dist_tol, out);
    if (interp->parsed()) return cmd_interpolate(kind, fx, fy, grid_text, out_path, out);
    if (mean->parsed()) {
      return cmd_mean(mean_kind, files, mean_tol, max_cycles, out_path, report_path, out);
    }
    if (gen->parsed()) return cmd_gen(n, seed, unit_det, sparse, density, out_path, out);
    if (shrink->parsed()) return cmd_exp_shrinkage(n, count, seed, grid_text, out_path, out);
    if (mid->parsed()) return cmd_exp_midpoint(mid_n, mid_count, seed, r_max, out_path, out);
    if (spars->parsed()) {
      sparsity_cmd = true;
      return cmd_exp_sparsity(sp_n, sp_k, density, seed, sp_tol, out_path, out);
    }
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << "\n";
    return sparsity_cmd ? kSolverError : kNoConvergence;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kInputError;
  } catch (const NotSymmetric& e) {
    err << "invalid matrix: " << e.what() << "\n";
    return kInputError;
  } catch (const NotPositiveDefinite& e) {
    err << "invalid matrix: " << e.what() << "\n";
    return kInputError;
  } catch (const DimensionMismatch& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInputError;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInputError;
  } catch (const SpdError& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolverError;
  }
  return kInputError;
}

}  // namespace spdgeo::cli
