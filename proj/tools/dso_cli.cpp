// Command-line harness: graph generation, DSO preprocessing and queries,
// second-shortest-path tables, oracle verification, benchmarks, and the
// hard-instance builders.
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "dso/apsisp.hpp"
#include "dso/baseline.hpp"
#include "dso/dso_fastpre.hpp"
#include "dso/dso_fastquery.hpp"
#include "dso/exclude.hpp"
#include "dso/harness.hpp"
#include "dso/lowerbound.hpp"
#include "dso/oracle.hpp"
#include "dso/queries.hpp"
#include "dso/rng.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerification = 3;

struct CommonOpts {
  std::string config_path;
  std::string mode = "charged";
  std::uint64_t seed = 0;
  std::int64_t bandwidth = 1;
  double envelope_c = 8.0;
  double c = 2.0;
  double cg = 4.0;
  double allowance = 0.01;
};

// Config file: one "key = value" per line, '#' comments. Flags win.
void load_config(CommonOpts& o) {
  if (o.config_path.empty()) return;
  std::ifstream f(o.config_path);
  if (!f) throw dso::GraphError("cannot open config file: " + o.config_path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok)
        throw dso::ParseError("expected 'key = value'", lineno);
      continue;
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "mode")
      o.mode = val;
    else if (key == "seed")
      o.seed = std::stoull(val);
    else if (key == "bandwidth")
      o.bandwidth = std::stoll(val);
    else if (key == "envelope_c")
      o.envelope_c = std::stod(val);
    else if (key == "c")
      o.c = std::stod(val);
    else if (key == "cg")
      o.cg = std::stod(val);
    else if (key == "allowance")
      o.allowance = std::stod(val);
    else
      throw dso::ParseError("unknown config key '" + key + "'", lineno);
  }
}

dso::EngineConfig engine_config(const CommonOpts& o) {
  dso::EngineConfig cfg;
  if (o.mode == "charged")
    cfg.cost_model.mode = dso::CostMode::kCharged;
  else if (o.mode == "faithful")
    cfg.cost_model.mode = dso::CostMode::kFaithful;
  else
    throw CLI::ValidationError("--mode must be charged or faithful");
  cfg.bandwidth = o.bandwidth;
  cfg.envelope_c = o.envelope_c;
  cfg.seed = o.seed;
  return cfg;
}

std::vector<int> parse_k_list(const std::string& spec) {
  std::vector<int> ks;
  auto dots = spec.find("..");
  if (dots != std::string::npos) {
    int lo = std::stoi(spec.substr(0, dots));
    int hi = std::stoi(spec.substr(dots + 2));
    for (int k = lo; k <= hi; k *= 2) ks.push_back(k);
    if (ks.empty() || ks.back() != hi) ks.push_back(hi);
  } else {
    std::istringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) ks.push_back(std::stoi(tok));
  }
  return ks;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw dso::GraphError("cannot write " + path);
  f << content;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw dso::GraphError("cannot write " + path);
  return file;
}

void print_report(const std::string& name,
                  const dso::harness::VerifyReport& rep) {
  std::cout << name << ": checked=" << rep.checked
            << " mismatches=" << rep.mismatches
            << " mismatch_rate=" << rep.mismatch_rate()
            << " one_sided_violations=" << rep.one_sided_violations
            << " bandwidth_violations=" << rep.bandwidth_violations << "\n";
  for (const std::string& f : rep.failures) std::cout << "  " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CONGEST distance sensitivity oracle workbench"};
  app.require_subcommand(1);
  CommonOpts opts;
  app.add_option("--config", opts.config_path, "key=value config file");
  app.add_option("--mode", opts.mode, "cost model: charged|faithful");
  app.add_option("--seed", opts.seed, "base seed");
  app.add_option("--bandwidth", opts.bandwidth, "words per link per round");
  app.add_option("--envelope-c", opts.envelope_c, "engine envelope constant");
  app.add_option("--c", opts.c, "source sampling constant");
  app.add_option("--cg", opts.cg, "subgraph count constant");
  app.add_option("--allowance", opts.allowance,
                 "tolerated inexact fraction for sampled answers");

  auto* gen = app.add_subcommand("generate", "emit a random graph file");
  int gen_n = 32, gen_m = 128;
  std::int64_t gen_w = 100;
  std::string gen_out = "-";
  gen->add_option("--n", gen_n, "vertices")->required();
  gen->add_option("--m", gen_m, "edges")->required();
  gen->add_option("--max-w", gen_w, "max weight");
  gen->add_option("--out", gen_out, "output path (- for stdout)");

  auto* pre = app.add_subcommand("preprocess", "run DSO preprocessing");
  std::string pre_graph, pre_algo = "fastquery", pre_ledger;
  pre->add_option("--graph", pre_graph, "graph file")->required();
  pre->add_option("--algo", pre_algo, "fastquery|fastpre");
  pre->add_option("--ledger", pre_ledger, "write phase ledger CSV here");

  auto* qry = app.add_subcommand("query", "answer a replacement-path batch");
  std::string q_graph, q_algo = "fastquery", q_file, q_out = "-", q_ledger;
  qry->add_option("--graph", q_graph, "graph file")->required();
  qry->add_option("--algo", q_algo,
                  "fastquery|fastpre|baseline-general|baseline-seb");
  qry->add_option("--queries", q_file, "query file: lines 'x y u v'")
      ->required();
  qry->add_option("--out", q_out, "answers CSV path");
  qry->add_option("--ledger", q_ledger, "write phase ledger CSV here");

  auto* ap = app.add_subcommand("apsisp",
                                "all-pairs second simple shortest paths");
  std::string ap_graph, ap_out = "-", ap_ledger;
  ap->add_option("--graph", ap_graph, "graph file")->required();
  ap->add_option("--out", ap_out, "d2 matrix CSV path");
  ap->add_option("--ledger", ap_ledger, "write phase ledger CSV here");

  auto* ex = app.add_subcommand("exclude", "excluded shortest paths");
  std::string ex_graph, ex_requests, ex_out = "-";
  ex->add_option("--graph", ex_graph, "graph file")->required();
  ex->add_option("--requests", ex_requests,
                 "request file: 'source; path = v0 v1 ...'")
      ->required();
  ex->add_option("--out", ex_out, "results CSV path");

  auto* ver = app.add_subcommand("verify", "randomized oracle comparison");
  std::string v_algo = "apsisp";
  int v_n = 24, v_trials = 20, v_queries = 25;
  ver->add_option("--algo", v_algo,
                  "exclude|fastquery|fastpre|apsisp|baseline|seb-baseline|"
                  "lowerbound-fig1|lowerbound-fig2");
  ver->add_option("--n", v_n, "max instance size");
  ver->add_option("--trials", v_trials, "instances / graphs");
  ver->add_option("--queries", v_queries, "queries per graph");

  auto* ben = app.add_subcommand("bench", "measured rounds and congestion");
  std::string b_algo = "fastquery", b_k = "1..64", b_out = "-";
  int b_n = 64;
  ben->add_option("--algo", b_algo, "fastquery|fastpre|exclude|baseline");
  ben->add_option("--n", b_n, "graph size");
  ben->add_option("--k", b_k, "batch sizes: list 1,4,16 or range 1..64");
  ben->add_option("--out", b_out, "CSV path");

  auto* lb = app.add_subcommand("lowerbound", "hard instance builders");
  std::string lb_family = "fig2", lb_out_prefix = "lb", lb_bits_file;
  int lb_k = 4, lb_q = 4, lb_ell = 8, lb_n = 16, lb_stretch = 1;
  std::uint64_t lb_bits_seed = 1;
  bool lb_directed = false;
  lb->add_option("--family", lb_family, "fig1|fig2");
  lb->add_option("--k", lb_k, "endpoint pairs (fig1)");
  lb->add_option("--q", lb_q, "bit paths (fig1)");
  lb->add_option("--ell", lb_ell, "path length (fig1)");
  lb->add_option("--n", lb_n, "bit count (fig2)");
  lb->add_option("--stretch", lb_stretch, "gap stretch (fig2)");
  lb->add_option("--bits-seed", lb_bits_seed, "random bits seed");
  lb->add_option("--bits", lb_bits_file, "explicit bit file (0/1 tokens)");
  lb->add_flag("--directed", lb_directed, "directed fig2 variant");
  lb->add_option("--out", lb_out_prefix, "output prefix");

  // let engine-level options appear after the subcommand too
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    load_config(opts);
    dso::EngineConfig cfg = engine_config(opts);
    dso::CostMode mode = cfg.cost_model.mode;

    if (*gen) {
      dso::Graph g = dso::generate_random(gen_n, gen_m, gen_w, opts.seed);
      std::ofstream file;
      dso::write_graph(g, open_out(file, gen_out));
      return 0;
    }

    if (*pre) {
      dso::Graph g = dso::read_graph_file(pre_graph);
      dso::NetworkRun run(g, cfg);
      if (pre_algo == "fastquery") {
        auto st = dso::preprocess_fast_query(run, opts.seed);
        std::cout << "preprocessed fastquery: n=" << g.n() << " m=" << g.m()
                  << " rounds=" << run.ledger().rounds()
                  << " peak_congestion=" << run.ledger().peak_congestion()
                  << " words_per_node<=" << st.storage_words_per_node_max()
                  << "\n";
      } else if (pre_algo == "fastpre") {
        dso::FastPreParams params;
        params.c = opts.c;
        params.c_g = opts.cg;
        params.seed = opts.seed;
        auto st = dso::preprocess_fast_pre(run, params);
        std::cout << "preprocessed fastpre: n=" << g.n() << " m=" << g.m()
                  << " rounds=" << run.ledger().rounds()
                  << " peak_congestion=" << run.ledger().peak_congestion()
                  << " words_per_node=" << st.storage_words_per_node_max()
                  << "\n";
      } else {
        throw CLI::ValidationError("unknown --algo " + pre_algo);
      }
      if (!pre_ledger.empty()) {
        std::ostringstream ss;
        run.ledger().write_csv(ss);
        write_file(pre_ledger, ss.str());
      }
      return 0;
    }

    if (*qry) {
      dso::Graph g = dso::read_graph_file(q_graph);
      dso::QueryBatch batch = dso::read_queries_file(q_file);
      dso::NetworkRun run(g, cfg);
      std::vector<dso::AnswerRow> rows;
      bool with_case = false;
      if (q_algo == "fastquery") {
        auto st = dso::preprocess_fast_query(run, opts.seed);
        rows = dso::answer_batch_fast(run, st, batch);
      } else if (q_algo == "fastpre") {
        dso::FastPreParams params;
        params.c = opts.c;
        params.c_g = opts.cg;
        params.seed = opts.seed;
        auto st = dso::preprocess_fast_pre(run, params);
        rows = dso::answer_batch_pre(run, st, batch);
        with_case = true;
      } else if (q_algo == "baseline-general") {
        rows = dso::answer_general_no_pre(run, batch);
      } else if (q_algo == "baseline-seb") {
        rows = dso::answer_seb_no_pre(run, batch, opts.seed);
      } else {
        throw CLI::ValidationError("unknown --algo " + q_algo);
      }
      std::ofstream file;
      dso::write_answers_csv(rows, open_out(file, q_out), with_case);
      if (!q_ledger.empty()) {
        std::ostringstream ss;
        run.ledger().write_csv(ss);
        write_file(q_ledger, ss.str());
      }
      return 0;
    }

    if (*ap) {
      dso::Graph g = dso::read_graph_file(ap_graph);
      dso::NetworkRun run(g, cfg);
      auto table = dso::compute_2apsisp(run, opts.seed);
      std::ofstream file;
      dso::write_sisp_csv(table, open_out(file, ap_out));
      if (!ap_ledger.empty()) {
        std::ostringstream ss;
        run.ledger().write_csv(ss);
        write_file(ap_ledger, ss.str());
      }
      return 0;
    }

    if (*ex) {
      dso::Graph g = dso::read_graph_file(ex_graph);
      std::ifstream rf(ex_requests);
      if (!rf) throw dso::GraphError("cannot open " + ex_requests);
      auto reqs = dso::read_exclude_requests(rf, g);
      dso::NetworkRun run(g, cfg);
      auto results = dso::exclude_multi_source(run, reqs, opts.seed);
      std::ofstream file;
      dso::write_exclude_csv(results, open_out(file, ex_out));
      return 0;
    }

    if (*ver) {
      dso::harness::VerifyReport rep;
      if (v_algo == "exclude")
        rep = dso::harness::verify_exclude(v_n, v_trials, opts.seed, mode);
      else if (v_algo == "fastquery")
        rep = dso::harness::verify_fastquery(v_n, v_trials, v_queries,
                                             opts.seed, mode);
      else if (v_algo == "fastpre")
        rep = dso::harness::verify_fastpre(v_n, v_trials, v_queries, opts.c,
                                           opts.cg, opts.seed, mode);
      else if (v_algo == "apsisp")
        rep = dso::harness::verify_apsisp(v_n, v_trials, opts.seed, mode);
      else if (v_algo == "baseline")
        rep = dso::harness::verify_baseline(v_n, v_queries, opts.seed, mode,
                                            false);
      else if (v_algo == "seb-baseline")
        rep = dso::harness::verify_baseline(v_n, v_queries, opts.seed, mode,
                                            true);
      else if (v_algo == "lowerbound-fig1")
        rep = dso::harness::verify_lowerbound_fig1(4, 4, 8, v_trials,
                                                   opts.seed);
      else if (v_algo == "lowerbound-fig2")
        rep = dso::harness::verify_lowerbound_fig2(v_n, v_trials, 1,
                                                   opts.seed);
      else
        throw CLI::ValidationError("unknown --algo " + v_algo);
      print_report(v_algo, rep);
      bool randomized = (v_algo == "fastpre");
      double allowed = randomized ? opts.allowance : 0.0;
      if (rep.one_sided_violations > 0 || rep.bandwidth_violations > 0 ||
          rep.mismatch_rate() > allowed)
        return kExitVerification;
      return 0;
    }

    if (*ben) {
      std::vector<int> ks = parse_k_list(b_k);
      std::vector<dso::harness::BenchRow> rows;
      if (b_algo == "fastquery")
        rows = dso::harness::bench_fastquery(b_n, ks, opts.seed, mode);
      else if (b_algo == "fastpre")
        rows = dso::harness::bench_fastpre(b_n, ks, opts.seed, mode);
      else if (b_algo == "exclude")
        rows = dso::harness::bench_exclude(b_n, ks, opts.seed, mode);
      else if (b_algo == "baseline")
        rows = dso::harness::bench_baseline(b_n, ks, opts.seed, mode);
      else
        throw CLI::ValidationError("unknown --algo " + b_algo);
      std::ofstream file;
      dso::harness::write_bench_csv(rows, open_out(file, b_out));
      return 0;
    }

    if (*lb) {
      auto read_bits = [&](int count) {
        std::vector<char> bits(count, 0);
        if (!lb_bits_file.empty()) {
          std::ifstream bf(lb_bits_file);
          if (!bf) throw dso::GraphError("cannot open " + lb_bits_file);
          int b, i = 0;
          while (bf >> b && i < count) bits[i++] = b ? 1 : 0;
        } else {
          dso::Rng rng(lb_bits_seed);
          for (char& b : bits) b = rng.coin(0.5) ? 1 : 0;
        }
        return bits;
      };
      std::ostringstream graph_text, manifest;
      bool pass = false;
      if (lb_family == "fig1") {
        auto bits =
            dso::DisjointnessInstance::random(lb_k, lb_q, lb_bits_seed, true);
        auto b = dso::build_fig1(lb_k, lb_q, lb_ell, bits);
        auto rep = dso::verify_fig1_claims(b);
        dso::write_graph(b.graph, graph_text);
        dso::write_fig1_manifest(b, rep, manifest);
        pass = rep.all_pass();
      } else if (lb_family == "fig2") {
        auto bits = read_bits(lb_n);
        auto b = dso::build_fig2(lb_n, bits, lb_stretch, lb_directed);
        auto rep = dso::verify_fig2_claims(b);
        dso::write_graph(b.graph, graph_text);
        dso::write_fig2_manifest(b, rep, manifest);
        pass = rep.all_pass();
      } else {
        throw CLI::ValidationError("unknown --family " + lb_family);
      }
      write_file(lb_out_prefix + ".graph", graph_text.str());
      write_file(lb_out_prefix + ".manifest.jsonl", manifest.str());
      std::cout << "wrote " << lb_out_prefix << ".graph and " << lb_out_prefix
                << ".manifest.jsonl; claims " << (pass ? "pass" : "FAIL")
                << "\n";
      return pass ? 0 : kExitVerification;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dso::ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const dso::GraphError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
