// Command-line front end: instance generation, clustering engines, oracles,
// certification and benchmark suites, all emitting JSON/CSV.
//
// Exit codes: 0 success, 1 usage error, 2 assertion/acceptance failure,
// 3 I/O error.

#include <iostream>

#include <CLI11.hpp>

#include "wardlab/bench.hpp"

namespace {

using namespace wardlab;

int cmd_generate(const std::string& subtype, int d, double heavy_weight, double eps,
                 int k, int dim, const std::string& sizes_csv, double delta, bool strong,
                 int n, const std::string& dist_name, int components,
                 std::uint64_t seed, const std::string& out_path) {
  std::string payload;
  if (subtype == "lowerbound") {
    payload = dataset_to_json(gen_lowerbound({d, heavy_weight, eps}));
  } else if (subtype == "separated") {
    std::vector<int> sizes;
    std::stringstream ss(sizes_csv);
    for (std::string part; std::getline(ss, part, ',');) sizes.push_back(std::stoi(part));
    payload = dataset_to_json(gen_separated(k, dim, sizes, delta, seed, strong));
  } else if (subtype == "random") {
    RandomDistribution rd;
    if (dist_name == "uniform-cube") rd = RandomDistribution::uniform_cube;
    else if (dist_name == "gaussian") rd = RandomDistribution::gaussian;
    else if (dist_name == "mixture") rd = RandomDistribution::mixture;
    else throw std::invalid_argument("unknown distribution: " + dist_name);
    payload = dataset_to_json(gen_random(n, dim, seed, rd, components));
  } else if (subtype == "star") {
    payload = metric_instance_to_json(star_graph_instance());
  } else if (subtype == "triangle") {
    payload = dataset_to_json(triangle_instance());
  } else {
    throw std::invalid_argument("unknown subtype: " + subtype);
  }
  write_file(out_path, payload);
  return 0;
}

int cmd_cluster(const std::string& input, const std::string& engine_flag, int k,
                const std::string& out_dendrogram, const std::string& out_clustering) {
  Engine engine;
  if (engine_flag == "reference") engine = Engine::reference_greedy;
  else if (engine_flag == "nnchain") engine = Engine::nn_chain;
  else throw std::invalid_argument("unknown engine: " + engine_flag);

  const Dataset ds = load_dataset(input);
  const Dendrogram dg = run_engine(ds, engine);
  write_file(out_dendrogram, dendrogram_to_json(dg));
  if (k > 0) {
    if (out_clustering.empty())
      throw std::invalid_argument("--k requires --out-clustering");
    write_file(out_clustering, clustering_to_json(extract_clustering(dg, ds, k)));
  }
  return 0;
}

int cmd_certify(const std::string& input, const std::string& out_path) {
  const Dataset ds = load_dataset(input);
  write_file(out_path, certificate_to_json(certify(ds)));
  return 0;
}

int cmd_lowerbound(int d_min, int d_max, const std::string& out_csv) {
  if (d_min < 2 || d_min > d_max || d_max > 8)
    throw std::invalid_argument("need 2 <= d-min <= d-max <= 8");
  std::vector<std::vector<std::string>> rows;
  for (int d = d_min; d <= d_max; ++d) {
    const Dataset ds = gen_lowerbound({d});
    const Dendrogram dg = ward_reference(ds);
    const int k = 1 << d;
    const double measured_ward = extract_clustering(dg, ds, k).cost;

    // Planted cost: per-class 1-means cost under the planted labels.
    std::vector<std::vector<int>> members(k);
    for (int i = 0; i < ds.size(); ++i) members[(*ds.labels)[i]].push_back(i);
    double measured_opt = 0.0;
    for (const auto& m : members) {
      const std::vector<WeightedPoint> pts = gather_points(ds, m);
      measured_opt += cost_to_center(pts, centroid(pts));
    }
    rows.push_back({std::to_string(d), fmt_double(measured_ward),
                    fmt_double(closed_form_ward(d)), fmt_double(measured_opt),
                    fmt_double(closed_form_opt(d)),
                    fmt_double(measured_ward / measured_opt)});
  }
  write_file(out_csv, csv_table({"d", "measured_ward", "closed_ward",
                                 "measured_opt_planted", "closed_opt", "ratio"},
                                rows));
  return 0;
}

int cmd_bench(const std::string& suite_flag, int seeds, std::uint64_t seed,
              const std::string& out_csv) {
  const Suite suite = parse_suite(suite_flag);
  const SuiteOutcome out = run_suite(suite, seeds, seed, default_thread_count());
  write_file(out_csv, suite_to_csv(out));
  if (!out.all_pass) {
    std::cerr << "bench: suite " << suite_name(suite) << " failed (" << out.summary << ")\n";
    return 2;
  }
  std::cout << suite_name(suite) << ": " << out.summary << "\n";
  return 0;
}

int cmd_kmedian_demo(const std::string& instance, const std::string& out_path) {
  std::string payload;
  if (instance == "triangle") {
    const Dataset ds = triangle_instance();
    const MedianMergeTrace med = kmedian_greedy_euclidean(ds, 1);
    const MedianMergeTrace ward = ward_trace_euclidean(ds, 1);
    payload = kmedian_demo_to_json(med, &ward);
  } else if (instance == "star") {
    // No Euclidean realization of the star metric exists, so there is no
    // Ward companion trace for it.
    const MedianMergeTrace med = kmedian_greedy_discrete(star_graph_instance(), 1);
    payload = kmedian_demo_to_json(med, nullptr);
  } else {
    throw std::invalid_argument("unknown instance: " + instance);
  }
  write_file(out_path, payload);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wardlab: Ward's method workbench (engines, oracles, generators, certifiers)"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate an instance as JSON");
  std::string gen_subtype, gen_sizes = "4,4,4", gen_dist = "gaussian", gen_out;
  int gen_d = 2, gen_k = 3, gen_dim = 2, gen_n = 100, gen_components = 3;
  double gen_heavy = 1e9, gen_eps = 1e-4, gen_delta = 5.0;
  bool gen_strong = false;
  std::uint64_t gen_seed = 0;
  gen->add_option("subtype", gen_subtype, "lowerbound|separated|random|star|triangle")
      ->required();
  gen->add_option("--d", gen_d, "lowerbound dimension (>= 2)");
  gen->add_option("--heavy-weight", gen_heavy, "lowerbound heavy point weight");
  gen->add_option("--eps", gen_eps, "lowerbound perturbation");
  gen->add_option("--k", gen_k, "separated cluster count");
  gen->add_option("--dim", gen_dim, "ambient dimension");
  gen->add_option("--sizes", gen_sizes, "separated cluster sizes, comma separated");
  gen->add_option("--delta", gen_delta, "separated target separation");
  gen->add_flag("--strong", gen_strong, "target the strong (global-radius) separation");
  gen->add_option("--n", gen_n, "random point count");
  gen->add_option("--dist", gen_dist, "uniform-cube|gaussian|mixture");
  gen->add_option("--components", gen_components, "mixture component count");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "output file")->required();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Run an agglomerative engine");
  std::string cl_input, cl_engine = "reference", cl_out_dendro, cl_out_clustering;
  int cl_k = 0;
  cluster->add_option("--input", cl_input, "dataset JSON")->required();
  cluster->add_option("--engine", cl_engine, "reference|nnchain");
  cluster->add_option("--k", cl_k, "also extract the k-clustering");
  cluster->add_option("--out-dendrogram", cl_out_dendro, "dendrogram JSON output")->required();
  cluster->add_option("--out-clustering", cl_out_clustering, "clustering JSON output");

  // certify
  auto* cert = app.add_subcommand("certify", "Certify a labeled dataset");
  std::string ce_input, ce_out;
  cert->add_option("--input", ce_input, "labeled dataset JSON")->required();
  cert->add_option("--out", ce_out, "certificate JSON output")->required();

  // lowerbound
  auto* lb = app.add_subcommand("lowerbound", "Reproduce the exponential lower bound");
  int lb_min = 2, lb_max = 8;
  std::string lb_out;
  lb->add_option("--d-min", lb_min, "smallest dimension (>= 2)");
  lb->add_option("--d-max", lb_max, "largest dimension (<= 8)");
  lb->add_option("--out-csv", lb_out, "CSV output")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
  std::string be_suite, be_out;
  int be_seeds = 0;
  std::uint64_t be_seed = 0;
  bench->add_option("--suite", be_suite,
                    "separated-2approx|separated-recovery|oned|kmeanspp-compare")
      ->required();
  bench->add_option("--seeds", be_seeds, "instance count (0 = suite default)");
  bench->add_option("--seed", be_seed, "master seed");
  bench->add_option("--out-csv", be_out, "CSV output")->required();

  // kmedian-demo
  auto* demo = app.add_subcommand("kmedian-demo", "Greedy k-median non-monotonicity demos");
  std::string de_instance = "triangle", de_out;
  demo->add_option("--instance", de_instance, "star|triangle");
  demo->add_option("--out", de_out, "trace JSON output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed())
      return cmd_generate(gen_subtype, gen_d, gen_heavy, gen_eps, gen_k, gen_dim, gen_sizes,
                          gen_delta, gen_strong, gen_n, gen_dist, gen_components, gen_seed,
                          gen_out);
    if (cluster->parsed())
      return cmd_cluster(cl_input, cl_engine, cl_k, cl_out_dendro, cl_out_clustering);
    if (cert->parsed()) return cmd_certify(ce_input, ce_out);
    if (lb->parsed()) return cmd_lowerbound(lb_min, lb_max, lb_out);
    if (bench->parsed()) return cmd_bench(be_suite, be_seeds, be_seed, be_out);
    if (demo->parsed()) return cmd_kmedian_demo(de_instance, de_out);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const wardlab::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
