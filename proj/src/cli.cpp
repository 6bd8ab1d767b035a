#include "cumbia/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>

#include "cumbia/bicluster.hpp"
#include "cumbia/embedding.hpp"
#include "cumbia/ingest.hpp"
#include "cumbia/io.hpp"
#include "cumbia/plot.hpp"

namespace cumbia::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string in, out, labels, groups, diss_out;
  std::string delim = "comma";
  std::string orient = "samples-rows";
  std::string missing = "NA";
  std::string zero_variance = "error";
  std::string s = "full";
  std::string method = "cumbia";
  std::string select_order;
  std::uint64_t seed = 0;
  Eigen::Index k = 3;
  std::optional<Eigen::Index> k_vars;
  Eigen::Index dims = 3;
  double alpha = 1.0;
  Eigen::Index k0 = 3;
  double drop_fraction = 0.1;
  Eigen::Index min_objects = 2;
  Eigen::Index component_x = 1, component_y = 2;
  unsigned workers = 1;
  bool plot = false;
  bool log2 = false;
  bool zscore = false;
  std::vector<std::string> targets;
  std::size_t top = 50;
  std::optional<std::size_t> bottom_f;
  std::size_t biclusters = 1;
  // synth
  Eigen::Index n = 60, p = 1500, n_planted = 6, p_planted = 25;
  double shift = 2.0;
};

char delimiter(const RunConfig& rc) { return rc.delim == "tab" ? '\t' : ','; }

TableFormat table_format(const RunConfig& rc) {
  return {delimiter(rc),
          rc.orient == "variables-rows" ? Orientation::VariablesAsRows : Orientation::SamplesAsRows,
          rc.missing};
}

std::optional<Eigen::Index> parse_rank(const std::string& s) {
  if (s == "full") return std::nullopt;
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 1) throw ParameterError("--s must be a positive integer or 'full'");
  return static_cast<Eigen::Index>(v);
}

CumbiaConfig cumbia_config(const RunConfig& rc) {
  CumbiaConfig cfg;
  cfg.rank = parse_rank(rc.s);
  cfg.k_samples = rc.k;
  cfg.k_variables = rc.k_vars;
  cfg.workers = rc.workers;
  return cfg;
}

/// Collects outputs and writes them, then the manifest, atomically.
class Outputs {
 public:
  Outputs(const RunConfig& rc, std::vector<std::string> argv) : rc_(rc), argv_(std::move(argv)) {}

  void add(const fs::path& path, std::string contents) { files_.emplace_back(path, std::move(contents)); }
  void warn(const std::vector<std::string>& w) { warnings_.insert(warnings_.end(), w.begin(), w.end()); }
  ordered_json& parameters() { return parameters_; }
  ordered_json& extra() { return extra_; }

  void commit(std::ostream& err) {
    ordered_json manifest;
    manifest["tool"] = "cumbia";
    manifest["command"] = rc_.command;
    manifest["argv"] = argv_;
    manifest["parameters"] = parameters_;
    if (!rc_.in.empty()) {
      manifest["input"] = {{"path", rc_.in}, {"sha256", io::sha256_hex(io::read_file(rc_.in))}};
    }
    ordered_json outs = ordered_json::array();
    for (const auto& [path, contents] : files_) {
      io::write_atomic(path, contents);
      outs.push_back({{"path", path.string()}, {"sha256", io::sha256_hex(contents)}});
    }
    manifest["outputs"] = outs;
    manifest["warnings"] = warnings_;
    for (const auto& [key, value] : extra_.items()) manifest[key] = value;
    io::write_atomic(fs::path(rc_.out + ".manifest.json"), manifest.dump(2) + '\n');
    for (const auto& w : warnings_) err << "warning: " << w << '\n';
  }

 private:
  const RunConfig& rc_;
  std::vector<std::string> argv_;
  std::vector<std::pair<fs::path, std::string>> files_;
  std::vector<std::string> warnings_;
  ordered_json parameters_ = ordered_json::object();
  ordered_json extra_ = ordered_json::object();
};

DataMatrix load_input(const RunConfig& rc) {
  if (rc.in.empty()) throw ParameterError("--in is required");
  return load_table(rc.in, table_format(rc));
}

io::LabelMap color_labels(const RunConfig& rc) {
  return rc.labels.empty() ? io::LabelMap{} : io::read_labels(rc.labels, delimiter(rc));
}

void add_scatter(Outputs& outs, const RunConfig& rc, const plot::ScatterPoints& pts) {
  if (!rc.plot) return;
  outs.add(rc.out + ".svg", plot::scatter_svg(pts, rc.component_x - 1, rc.component_y - 1, color_labels(rc)));
}

void run_synth(const RunConfig& rc, Outputs& outs) {
  SynthSpec spec{rc.n, rc.p, rc.n_planted, rc.p_planted, rc.shift, rc.seed};
  const auto data = synth_block(spec);
  outs.parameters() = {{"n", rc.n}, {"p", rc.p}, {"n_planted", rc.n_planted}, {"p_planted", rc.p_planted},
                       {"shift", rc.shift}, {"seed", rc.seed}, {"delim", rc.delim}};
  outs.extra()["seed"] = rc.seed;
  outs.add(rc.out, io::table_text(data.matrix, delimiter(rc)));
  if (!rc.labels.empty()) {
    auto labels = data.matrix.sample_labels();
    labels.insert(labels.end(), data.matrix.variable_labels().begin(), data.matrix.variable_labels().end());
    auto groups = data.sample_groups.assignment;
    groups.insert(groups.end(), data.variable_groups.assignment.begin(), data.variable_groups.assignment.end());
    outs.add(rc.labels, io::labels_text(labels, groups, delimiter(rc)));
  }
}

std::vector<Eigen::Index> selected_variables(const DataMatrix& x, const RunConfig& rc) {
  const auto map = io::read_labels(rc.groups, delimiter(rc));
  GroupLabels groups;
  for (const auto& s : x.sample_labels()) {
    auto it = map.find(s);
    if (it == map.end()) throw InputError("sample '" + s + "' has no group in '" + rc.groups + "'");
    groups.assignment.push_back(it->second);
  }
  std::set<Eigen::Index> chosen;
  for (const auto& target : rc.targets)
    for (auto j : top_indices(t_statistic(x, groups, target), rc.top)) chosen.insert(j);
  if (rc.bottom_f)
    for (auto j : bottom_indices(f_statistic(x, groups), *rc.bottom_f)) chosen.insert(j);
  return {chosen.begin(), chosen.end()};
}

void run_preprocess(const RunConfig& rc, Outputs& outs) {
  DataMatrix x = load_input(rc);
  PreprocessReport report;
  if (rc.log2) {
    auto [filtered, r] = filter_and_log2(x);
    x = std::move(filtered);
    report = r;
  }
  const bool selecting = !rc.targets.empty() || rc.bottom_f.has_value();
  if (selecting && rc.groups.empty()) throw ParameterError("--groups is required for --target/--bottom-f");
  if (selecting && rc.zscore && rc.select_order.empty())
    throw ParameterError("--select-order {before-zscore|after-zscore} is required with selection and --zscore");
  const auto policy = rc.zero_variance == "drop" ? ZeroVariancePolicy::Drop : ZeroVariancePolicy::Error;

  std::size_t selected = 0;
  auto select = [&] {
    auto keep = selected_variables(x, rc);
    if (keep.empty()) throw InputError("variable selection kept no variables");
    selected = keep.size();
    x = x.select_variables(keep);
  };
  if (selecting && (!rc.zscore || rc.select_order == "before-zscore")) select();
  if (rc.zscore) x = zscore_variables(x, policy, &report);
  if (selecting && rc.zscore && rc.select_order == "after-zscore") select();

  outs.parameters() = {{"delim", rc.delim}, {"orient", rc.orient}, {"missing", rc.missing}, {"log2", rc.log2},
                       {"zscore", rc.zscore}, {"zero_variance", rc.zero_variance}, {"groups", rc.groups},
                       {"targets", rc.targets}, {"top", rc.top},
                       {"bottom_f", rc.bottom_f ? ordered_json(*rc.bottom_f) : ordered_json()},
                       {"select_order", rc.select_order}};
  outs.extra()["report"] = {{"dropped_missing", report.dropped_missing},
                            {"dropped_negative", report.dropped_negative},
                            {"dropped_constant", report.dropped_constant},
                            {"log2", report.log2},
                            {"zscored", report.zscored},
                            {"selected", selected},
                            {"samples", x.samples()},
                            {"variables", x.variables()}};
  outs.add(rc.out, io::table_text(x, delimiter(rc)));
}

ordered_json cumbia_parameters(const RunConfig& rc) {
  return {{"delim", rc.delim}, {"orient", rc.orient}, {"missing", rc.missing}, {"s", rc.s}, {"k", rc.k},
          {"k_vars", rc.k_vars ? ordered_json(*rc.k_vars) : ordered_json()}, {"workers", rc.workers}};
}

void run_cumbia(const RunConfig& rc, Outputs& outs) {
  const DataMatrix x = load_input(rc);
  const auto cfg = cumbia_config(rc);
  const auto f = svd(x);
  const auto joint = joint_matrix(x, f, cfg);
  Embedding e = classical_mds(joint, rc.dims);
  outs.parameters() = cumbia_parameters(rc);
  outs.parameters()["dims"] = rc.dims;
  outs.extra()["rank"] = f.rank();
  outs.extra()["rank_used"] = resolve_rank(cfg, f.rank());
  outs.extra()["dims_used"] = e.dims_used();
  outs.warn(e.warnings);
  outs.add(rc.out, io::embedding_text(e, delimiter(rc)));
  outs.add(rc.out + ".spectrum.txt", io::spectrum_text(e.eigenvalues));
  if (!rc.diss_out.empty()) outs.add(rc.diss_out, io::dissimilarity_text(joint, delimiter(rc)));
  add_scatter(outs, rc, plot::points_of(e));
}

void run_pca(const RunConfig& rc, Outputs& outs) {
  const DataMatrix x = load_input(rc);
  const auto b = pca_biplot(x, parse_rank(rc.s), rc.alpha);
  outs.parameters() = {{"delim", rc.delim}, {"orient", rc.orient}, {"missing", rc.missing}, {"s", rc.s},
                       {"alpha", rc.alpha}};
  outs.extra()["rank_used"] = b.rank_used;
  outs.add(rc.out, io::biplot_text(b, delimiter(rc)));
  add_scatter(outs, rc, plot::points_of(b));
}

void run_scree(const RunConfig& rc, Outputs& outs) {
  const DataMatrix x = load_input(rc);
  std::vector<double> spectrum;
  Scree s;
  if (rc.method == "pca") {
    const auto f = svd(x);
    spectrum.assign(f.singular_values.data(), f.singular_values.data() + f.rank());
    s = scree(spectrum, SpectrumKind::SingularValues);
  } else {
    const Embedding e = cumbia(x, cumbia_config(rc), 1);
    outs.warn(e.warnings);
    spectrum.assign(e.eigenvalues.data(), e.eigenvalues.data() + e.eigenvalues.size());
    s = scree(spectrum, SpectrumKind::Eigenvalues);
  }
  outs.parameters() = cumbia_parameters(rc);
  outs.parameters()["method"] = rc.method;
  outs.add(rc.out, io::scree_text(spectrum, s));
  if (rc.plot) outs.add(rc.out + ".svg", plot::scree_svg(s, rc.method == "pca" ? "PCA scree" : "CUMBIA scree"));
}

void run_shave(const RunConfig& rc, Outputs& outs) {
  DataMatrix x = load_input(rc);
  const auto cfg = cumbia_config(rc);
  const ShaveOptions opt{rc.k0, rc.drop_fraction, rc.min_objects};
  std::string text = io::trace_header();
  ordered_json found = ordered_json::array();
  for (std::size_t b = 0; b < rc.biclusters; ++b) {
    const auto trace = shave(x, cfg, opt);
    outs.warn(trace.warnings);
    text += io::trace_rows(trace, x, b);
    const auto& last = trace.steps.back();
    ordered_json entry = {{"samples", ordered_json::array()}, {"variables", ordered_json::array()}};
    for (auto i : last.samples) entry["samples"].push_back(x.sample_labels()[static_cast<std::size_t>(i)]);
    for (auto j : last.variables) entry["variables"].push_back(x.variable_labels()[static_cast<std::size_t>(j)]);
    found.push_back(entry);
    if (b + 1 == rc.biclusters) break;

    std::vector<Eigen::Index> rest_s, rest_v;
    for (Eigen::Index i = 0; i < x.samples(); ++i)
      if (!std::binary_search(last.samples.begin(), last.samples.end(), i)) rest_s.push_back(i);
    for (Eigen::Index j = 0; j < x.variables(); ++j)
      if (!std::binary_search(last.variables.begin(), last.variables.end(), j)) rest_v.push_back(j);
    if (static_cast<Eigen::Index>(rest_s.size()) < rc.min_objects ||
        static_cast<Eigen::Index>(rest_v.size()) < rc.min_objects) {
      outs.warn({"stopped after " + std::to_string(b + 1) + " biclusters: too few objects remain"});
      break;
    }
    x = x.select(rest_s, rest_v);
  }
  outs.parameters() = cumbia_parameters(rc);
  outs.parameters()["k0"] = rc.k0;
  outs.parameters()["drop_fraction"] = rc.drop_fraction;
  outs.parameters()["min_objects"] = rc.min_objects;
  outs.parameters()["biclusters"] = rc.biclusters;
  outs.extra()["final_biclusters"] = found;
  outs.add(rc.out, text);
}

void add_io_options(CLI::App* sub, RunConfig& rc, bool needs_input) {
  auto* in = sub->add_option("--in", rc.in, "Input table");
  if (needs_input) in->required()->check(CLI::ExistingFile);
  sub->add_option("--out", rc.out, "Output path")->required();
  sub->add_option("--delim", rc.delim, "Field delimiter")->check(CLI::IsMember({"comma", "tab"}));
  sub->add_option("--orient", rc.orient, "Input orientation")
      ->check(CLI::IsMember({"samples-rows", "variables-rows"}));
  sub->add_option("--missing", rc.missing, "Missing-value token");
}

void add_cumbia_options(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--k", rc.k, "Paths averaged for sample pairs")->check(CLI::PositiveNumber);
  sub->add_option("--k-vars", rc.k_vars, "Paths averaged for variable pairs")->check(CLI::PositiveNumber);
  sub->add_option("--s", rc.s, "Truncation rank or 'full'");
  sub->add_option("--workers", rc.workers, "Worker threads")->check(CLI::PositiveNumber);
}

void add_plot_options(CLI::App* sub, RunConfig& rc) {
  sub->add_flag("--plot", rc.plot, "Also write <out>.svg");
  sub->add_option("--component-x", rc.component_x, "Horizontal component (1-based)")->check(CLI::PositiveNumber);
  sub->add_option("--component-y", rc.component_y, "Vertical component (1-based)")->check(CLI::PositiveNumber);
  sub->add_option("--labels", rc.labels, "label,group file for marker colors")->check(CLI::ExistingFile);
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Joint sample/variable embedding (CUMBIA) and PCA biplots", "cumbia"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Generate the planted-block Gaussian benchmark");
  synth->add_option("--out", rc.out, "Output table")->required();
  synth->add_option("--delim", rc.delim, "Field delimiter")->check(CLI::IsMember({"comma", "tab"}));
  synth->add_option("--seed", rc.seed, "Generator seed");
  synth->add_option("--n", rc.n, "Samples")->check(CLI::PositiveNumber);
  synth->add_option("--p", rc.p, "Variables")->check(CLI::PositiveNumber);
  synth->add_option("--n-planted", rc.n_planted, "Planted samples")->check(CLI::NonNegativeNumber);
  synth->add_option("--p-planted", rc.p_planted, "Planted variables")->check(CLI::NonNegativeNumber);
  synth->add_option("--shift", rc.shift, "Planted mean shift");
  synth->add_option("--labels", rc.labels, "Write a label,group membership file here");

  auto* pre = app.add_subcommand("preprocess", "Filter, log2, select and z-score variables");
  add_io_options(pre, rc, true);
  pre->add_flag("--log2", rc.log2, "Drop missing/nonpositive variables, then log2");
  pre->add_flag("--zscore", rc.zscore, "Standardise each variable");
  pre->add_option("--zero-variance", rc.zero_variance, "Constant-variable policy")
      ->check(CLI::IsMember({"error", "drop"}));
  pre->add_option("--groups", rc.groups, "label,group file assigning samples to groups")->check(CLI::ExistingFile);
  pre->add_option("--target", rc.targets, "Keep the top variables by t statistic for this group (repeatable)");
  pre->add_option("--top", rc.top, "Variables kept per --target");
  pre->add_option("--bottom-f", rc.bottom_f, "Also keep this many variables with the lowest F statistic");
  pre->add_option("--select-order", rc.select_order, "Selection relative to z-scoring")
      ->check(CLI::IsMember({"before-zscore", "after-zscore"}));

  auto* cum = app.add_subcommand("cumbia", "Joint embedding of samples and variables");
  add_io_options(cum, rc, true);
  add_cumbia_options(cum, rc);
  cum->add_option("--dims", rc.dims, "Embedding dimensions")->check(CLI::PositiveNumber);
  cum->add_option("--diss-out", rc.diss_out, "Also export the joint dissimilarity matrix");
  add_plot_options(cum, rc);

  auto* pca = app.add_subcommand("pca", "SVD biplot coordinates");
  add_io_options(pca, rc, true);
  pca->add_option("--s", rc.s, "Rank or 'full'");
  pca->add_option("--alpha", rc.alpha, "Singular value split")->check(CLI::Range(0.0, 1.0));
  add_plot_options(pca, rc);

  auto* scr = app.add_subcommand("scree", "Component share spectrum");
  add_io_options(scr, rc, true);
  add_cumbia_options(scr, rc);
  scr->add_option("--method", rc.method, "Spectrum source")->check(CLI::IsMember({"cumbia", "pca"}));
  scr->add_flag("--plot", rc.plot, "Also write <out>.svg");

  auto* shv = app.add_subcommand("shave", "Backward-elimination biclusters");
  add_io_options(shv, rc, true);
  add_cumbia_options(shv, rc);
  shv->add_option("--k0", rc.k0, "Neighbours averaged per object score")->check(CLI::PositiveNumber);
  shv->add_option("--drop-fraction", rc.drop_fraction, "Fraction removed per step");
  shv->add_option("--min-objects", rc.min_objects, "Stop when a kind reaches this many objects");
  shv->add_option("--biclusters", rc.biclusters, "Disjoint biclusters to extract")->check(CLI::PositiveNumber);

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kInputError;
  }

  try {
    rc.command = app.get_subcommands().front()->get_name();
    Outputs outs(rc, args);
    if (rc.command == "synth") run_synth(rc, outs);
    else if (rc.command == "preprocess") run_preprocess(rc, outs);
    else if (rc.command == "cumbia") run_cumbia(rc, outs);
    else if (rc.command == "pca") run_pca(rc, outs);
    else if (rc.command == "scree") run_scree(rc, outs);
    else if (rc.command == "shave") run_shave(rc, outs);
    outs.commit(err);
    return kOk;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace cumbia::cli
