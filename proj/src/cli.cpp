#include "wassdict/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "wassdict/error.hpp"
#include "wassdict/reduce.hpp"
#include "wassdict/text_format.hpp"

namespace wassdict::cli {

namespace fs = std::filesystem;

std::vector<PersistenceDiagram> ingest_ensemble(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("no such directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pd") files.push_back(entry.path());
  if (files.empty()) throw DataError("no .pd files in " + dir.string());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  std::vector<PersistenceDiagram> out;
  out.reserve(files.size());
  for (const auto& f : files) {
    PersistenceDiagram d = read_diagram(f);
    out.push_back(d.label().empty() ? d.with_label(f.stem().string()) : std::move(d));
  }
  return out;
}

namespace {

struct Common {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 0;
  bool verbose = false;

  Parallelism parallelism() const { return {std::max<std::size_t>(1, threads)}; }
};

struct LearnArgs {
  std::string input;
  std::size_t m = 3;
  std::optional<std::size_t> size_cap;
  double factor = 5.0;
  std::string mode = "multiscale";
  double tau0 = 0.2;
  double tau_step = 0.05;
  std::size_t stall = 10;
  std::size_t max_iterations = 100;
  std::string output;
  std::string trace;
};

// Writes to `path`, or to `out` when path is empty or "-".
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw DataError("cannot open " + path + " for writing");
  write(file);
  if (!file) throw DataError("failed writing " + path);
}

OptimizationConfig make_config(const LearnArgs& a, const Common& c, std::ostream& err) {
  OptimizationConfig cfg;
  if (a.mode == "multiscale")
    cfg.mode = OptimizationMode::Multiscale;
  else if (a.mode == "naive")
    cfg.mode = OptimizationMode::Naive;
  else
    throw std::invalid_argument("unknown mode '" + a.mode + "' (multiscale or naive)");
  cfg.tau_schedule = make_tau_schedule(a.tau0, a.tau_step);
  cfg.stall_limit = a.stall;
  cfg.max_iterations = a.max_iterations;
  cfg.seed = c.seed;
  cfg.parallelism = c.parallelism();
  if (c.verbose)
    cfg.on_sample = [&err](const EnergySample& s) {
      err << "tau=" << s.tau << " iteration=" << s.iteration << " E_D=" << format_scalar(s.energy)
          << '\n';
    };
  return cfg;
}

void write_trace(const std::string& path, const DictionaryResult& result, std::ostream& out) {
  if (path.empty()) return;
  emit(path, out, [&](std::ostream& o) {
    o << "scale_tau,iteration,wallclock_s,E_D\n";
    for (const auto& s : result.trace)
      o << format_scalar(s.tau) << ',' << s.iteration << ',' << format_scalar(s.wallclock_s) << ','
        << format_scalar(s.energy) << '\n';
  });
}

void write_model_to(const std::string& path, const DictionaryModel& model, std::ostream& out) {
  emit(path, out, [&](std::ostream& o) { format_model(o, model); });
}

int learn(const LearnArgs& a, const Common& c, bool by_factor, std::ostream& out,
          std::ostream& err) {
  const auto ensemble = ingest_ensemble(a.input);
  const OptimizationConfig cfg = make_config(a, c, err);
  std::size_t cap = 0;
  if (by_factor) {
    cap = size_cap_for_factor(ensemble, a.m, a.factor);
  } else if (a.size_cap) {
    cap = *a.size_cap;
  } else {
    for (const auto& x : ensemble) cap += x.off_diagonal_count();
  }
  DictionaryResult result = optimize(ensemble, a.m, cap, cfg);
  write_trace(a.trace, result, out);
  const double best = result.best_energy;
  const DictionaryModel model = make_model(std::move(result), ensemble);
  write_model_to(a.output, model, out);
  if (c.verbose)
    err << "members=" << ensemble.size() << " atoms=" << a.m << " size_cap=" << cap
        << " atom_points=" << model.dictionary.total_size() << " E_D=" << format_scalar(best)
        << '\n';
  return kSuccess;
}

std::map<std::string, std::string> read_class_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string_view row = text::trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos)
      throw ParseError(path, line_no, "expected '<member>,<class>'");
    const std::string member(text::trim(row.substr(0, comma)));
    const std::string cls(text::trim(row.substr(comma + 1)));
    if (line_no == 1 && member == "label" && cls == "class") continue;
    out[member] = cls;
  }
  return out;
}

void add_learn_options(CLI::App* cmd, LearnArgs& a) {
  cmd->add_option("-m,--atoms", a.m, "Number of atoms")->capture_default_str();
  cmd->add_option("--mode", a.mode, "multiscale or naive")->capture_default_str();
  cmd->add_option("--tau0", a.tau0, "Coarsest persistence threshold, as a fraction of the range")
      ->capture_default_str();
  cmd->add_option("--tau-step", a.tau_step, "Threshold decrement between scales")
      ->capture_default_str();
  cmd->add_option("--stall", a.stall, "Non-improving iterations that end a scale")
      ->capture_default_str();
  cmd->add_option("--max-iterations", a.max_iterations, "Iteration cap per scale")
      ->capture_default_str();
  cmd->add_option("-o,--output", a.output, "Model file (default: standard output)");
  cmd->add_option("--trace", a.trace, "Energy trace CSV");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wasserstein dictionary encoding of persistence diagrams", "wassdict"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads (default: hardware concurrency)")
      ->envname("WASSDICT_THREADS");
  app.add_option("--seed", common.seed, "Seed for randomized evaluation steps")
      ->capture_default_str();
  app.add_flag("-v,--verbose", common.verbose, "Progress on standard error");

  std::vector<std::string> pair;
  auto* distance = app.add_subcommand("distance", "L2-Wasserstein distance between two diagrams");
  distance->add_option("diagrams", pair, "Two .pd files")->required()->expected(2);

  std::string dir, output;
  auto* matrix = app.add_subcommand("matrix", "Pairwise distance matrix of an ensemble as CSV");
  matrix->add_option("ensemble", dir, "Directory of .pd files")->required();
  matrix->add_option("-o,--output", output, "CSV file (default: standard output)");

  std::vector<std::string> bary_inputs;
  std::vector<double> bary_weights;
  auto* bary = app.add_subcommand("barycenter", "Weighted barycenter of diagrams");
  bary->add_option("diagrams", bary_inputs, ".pd files")->required();
  bary->add_option("--weights", bary_weights, "Comma-separated weights (default: uniform)")
      ->delimiter(',');
  bary->add_option("-o,--output", output, "Output .pd file (default: standard output)");

  LearnArgs learn_args;
  auto* learn_cmd = app.add_subcommand("learn", "Learn a dictionary from an ensemble");
  learn_cmd->add_option("ensemble", learn_args.input, "Directory of .pd files")->required();
  add_learn_options(learn_cmd, learn_args);
  learn_cmd->add_option("--size-cap", learn_args.size_cap,
                        "Cap on total atom points (default: total input points)");

  LearnArgs compress_args;
  auto* compress_cmd =
      app.add_subcommand("compress", "Learn a dictionary sized for a compression factor");
  compress_cmd->add_option("ensemble", compress_args.input, "Directory of .pd files")->required();
  add_learn_options(compress_cmd, compress_args);
  compress_cmd->add_option("--factor", compress_args.factor, "Target compression factor (>= 1)")
      ->capture_default_str();

  std::string model_path;
  std::size_t member = 0;
  auto* recon = app.add_subcommand("reconstruct", "Rebuild one member from a model");
  recon->add_option("model", model_path, "Model file")->required();
  recon->add_option("-n,--member", member, "Member index")->required();
  recon->add_option("-o,--output", output, "Output .pd file (default: standard output)");

  auto* embed = app.add_subcommand("embed", "Planar layout of a three-atom model");
  embed->add_option("model", model_path, "Model file")->required();
  embed->add_option("-o,--output", output, "CSV file (default: standard output)");

  std::string labels_path;
  bool consistency = false;
  std::optional<std::size_t> clusters;
  auto* eval = app.add_subcommand("eval", "Score a model against its ensemble");
  eval->add_option("model", model_path, "Model file")->required();
  eval->add_option("ensemble", dir, "Directory of .pd files")->required();
  eval->add_option("--labels", labels_path, "CSV of <member>,<class> ground truth");
  eval->add_flag("--cluster-consistency", consistency,
                 "Compare k-medoids clusterings of inputs and reconstructions");
  eval->add_option("--clusters", clusters,
                   "Cluster count for --cluster-consistency (default: classes, else atoms)");
  eval->add_option("-o,--output", output, "JSON file (default: standard output)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    const Parallelism par = common.parallelism();
    if (*distance) {
      const double d = wasserstein_distance(read_diagram(pair[0]), read_diagram(pair[1]));
      out << format_scalar(d) << '\n';
    } else if (*matrix) {
      const auto ensemble = ingest_ensemble(dir);
      const SquareMatrix d = distance_matrix(ensemble, par);
      emit(output, out, [&](std::ostream& o) {
        for (std::size_t i = 0; i < ensemble.size(); ++i)
          o << (i ? "," : "") << ensemble[i].label();
        o << '\n';
        for (std::size_t r = 0; r < d.size(); ++r) {
          for (std::size_t c = 0; c < d.size(); ++c) o << (c ? "," : "") << format_scalar(d(r, c));
          o << '\n';
        }
      });
    } else if (*bary) {
      Dictionary atoms;
      for (const auto& p : bary_inputs) atoms.atoms.push_back(read_diagram(p));
      const WeightVector w = bary_weights.empty() ? WeightVector::uniform(atoms.atom_count())
                                                  : WeightVector(bary_weights);
      BarycenterOptions options;
      options.parallelism = par;
      const Barycenter y = compute_barycenter(atoms, w, options);
      emit(output, out, [&](std::ostream& o) { format_diagram(o, y.diagram("barycenter")); });
      if (common.verbose) err << "frechet_energy=" << format_scalar(y.frechet_energy) << '\n';
    } else if (*learn_cmd) {
      return learn(learn_args, common, false, out, err);
    } else if (*compress_cmd) {
      return learn(compress_args, common, true, out, err);
    } else if (*recon) {
      const DictionaryModel model = read_model(model_path);
      const PersistenceDiagram y = reconstruct(model, member);
      emit(output, out, [&](std::ostream& o) { format_diagram(o, y); });
    } else if (*embed) {
      const Layout2D layout = embed_2d(read_model(model_path));
      emit(output, out, [&](std::ostream& o) {
        o << "label,x,y,lambda_1,lambda_2,lambda_3\n";
        for (std::size_t n = 0; n < layout.points.size(); ++n) {
          o << layout.member_labels[n] << ',' << format_scalar(layout.points[n].x) << ','
            << format_scalar(layout.points[n].y);
          for (double w : layout.weights[n].values()) o << ',' << format_scalar(w);
          o << '\n';
        }
      });
    } else if (*eval) {
      const DictionaryModel model = read_model(model_path);
      const auto ensemble = ingest_ensemble(dir);
      const ReconstructionReport report = reconstruction_error(model, ensemble, par);
      nlohmann::ordered_json scores;
      scores["members"] = ensemble.size();
      scores["atoms"] = model.atom_count();
      scores["compression_factor"] = compression_factor(model, ensemble);
      scores["reconstruction_error"]["average"] = report.average;
      scores["reconstruction_error"]["max_pairwise_distance"] = report.max_distance;
      for (std::size_t n = 0; n < ensemble.size(); ++n)
        scores["reconstruction_error"]["per_member"][ensemble[n].label()] = report.per_member[n];

      std::vector<std::string> truth;
      if (!labels_path.empty()) {
        const auto classes = read_class_labels(labels_path);
        for (const auto& x : ensemble) {
          const auto it = classes.find(x.label());
          if (it == classes.end())
            throw DataError(labels_path + ": no class for member '" + x.label() + "'");
          truth.push_back(it->second);
        }
        if (model.atom_count() == 3) {
          const LayoutScores s = eval_layout(embed_2d(model), truth,
                                             distance_matrix(ensemble, par), common.seed);
          scores["layout"] = {{"nmi", s.nmi}, {"ari", s.ari}, {"sim", s.sim}};
        } else {
          err << "layout scores need a three-atom model; skipped\n";
        }
      }
      if (consistency) {
        std::size_t k = model.atom_count();
        if (clusters)
          k = *clusters;
        else if (!truth.empty())
          k = std::set<std::string>(truth.begin(), truth.end()).size();
        const ClusterConsistency cc = cluster_consistency(model, ensemble, k, par);
        scores["cluster_consistency"] = {{"clusters", k}, {"ari", cc.ari},
                                         {"identical", cc.identical}};
      }
      emit(output, out, [&](std::ostream& o) { o << scores.dump(2) << '\n'; });
    }
    return kSuccess;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace wassdict::cli
