#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tslsynth/cfm.hpp"
#include "tslsynth/codegen.hpp"
#include "tslsynth/synthesis.hpp"
#include "tslsynth/transforms.hpp"

using namespace tslsynth;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Exit { kRealizable = 0, kUnrealizable = 1, kUnknown = 2, kUsage = 64, kData = 65, kFile = 66 };

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write '" + path + "'");
  out << text;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    spit(path, text);
  }
}

json symbols_json(const SymbolTable& st) {
  json j;
  j["inputs"] = st.inputs;
  j["outputs"] = st.outputs;
  j["functions"] = st.functions;
  j["predicates"] = st.predicates;
  return j;
}

int exit_of(Verdict v) {
  switch (v) {
    case Verdict::Realizable:
      return kRealizable;
    case Verdict::Unrealizable:
      return kUnrealizable;
    case Verdict::Unknown:
      break;
  }
  return kUnknown;
}

struct Run {
  ParsedSpec parsed;
  LtlSpec spec;
  SynthesisResult result;
  std::optional<Cfm> cfm;
  double seconds = 0;
};

Run synth_spec(const std::string& text, const Limits& limits, bool purity) {
  Run r{parse_spec(text), {}, {}, {}, 0};
  Formula f = purity ? assume_purity(r.parsed.formula, r.parsed.symbols) : r.parsed.formula;
  auto t0 = std::chrono::steady_clock::now();
  r.spec = encode(f, r.parsed.symbols);
  r.result = synthesize(r.spec, limits);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.result.machine) r.cfm = mealy_to_cfm(*r.result.machine, r.parsed.symbols);
  return r;
}

int cmd_check(const std::string& file) {
  auto ps = parse_spec(slurp(file));
  std::cout << symbols_json(ps.symbols).dump(2) << "\n";
  return 0;
}

int cmd_encode(const std::string& file, bool tlsf, bool as_json) {
  auto ps = parse_spec(slurp(file));
  auto spec = encode(ps.formula, ps.symbols);
  if (tlsf) {
    std::cout << export_tlsf(spec, fs::path(file).stem().string());
    return 0;
  }
  if (as_json) {
    json j;
    j["inputs"] = json::array();
    for (const auto& p : spec.inputs) j["inputs"].push_back(p.id);
    j["outputs"] = json::array();
    for (const auto& g : spec.groups) {
      json grp{{"signal", g.signal}, {"props", json::array()}, {"identity", g.identity_index}};
      for (const auto& p : g.props) grp["props"].push_back(p.id);
      j["outputs"].push_back(grp);
    }
    j["body"] = to_string(spec.body);
    j["constraint"] = to_string(spec.constraint);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  for (const auto& p : spec.inputs) {
    std::cout << "input  " << p.id << " = " << pretty(std::get<PredicateTerm>(p.origin)) << "\n";
  }
  for (const auto& g : spec.groups) {
    for (const auto& p : g.props) {
      std::cout << "output " << p.id << " = " << pretty(std::get<UpdateTerm>(p.origin)) << "\n";
    }
  }
  std::cout << to_string(spec.formula()) << "\n";
  return 0;
}

int cmd_synth(const std::string& file, const std::string& limits_text, const std::string& mealy_in,
              const std::string& out, bool purity, bool verify) {
  Limits limits = limits_from_env();
  if (!limits_text.empty()) limits = parse_limits(limits_text, limits);
  const std::string text = slurp(file);
  if (!mealy_in.empty()) {
    auto ps = parse_spec(text);
    auto spec = encode(ps.formula, ps.symbols);
    auto m = import_mealy(slurp(mealy_in), &spec);
    Cfm cfm = mealy_to_cfm(m, ps.symbols);
    if (auto cex = verify_cfm(cfm, ps.formula)) {
      std::cerr << "imported machine violates the specification\n" << describe(cfm, *cex);
      return kUnrealizable;
    }
    emit(out, export_cfm(cfm) + "\n");
    std::cerr << "Realizable states=" << cfm.states << "\n";
    return kRealizable;
  }
  Run r = synth_spec(text, limits, purity);
  std::cerr << to_string(r.result.verdict);
  if (r.result.bound >= 0) std::cerr << " bound=" << r.result.bound;
  if (r.cfm) std::cerr << " states=" << r.cfm->states;
  if (!r.result.reason.empty()) std::cerr << " (" << r.result.reason << ")";
  std::cerr << "\n";
  if (r.cfm) {
    if (verify) {
      if (auto cex = verify_cfm(*r.cfm, r.parsed.formula)) {
        std::cerr << "verification failed\n" << describe(*r.cfm, *cex);
        return kUnknown;
      }
    }
    emit(out, export_cfm(*r.cfm) + "\n");
  } else if (r.result.witness) {
    std::cerr << "environment strategy with " << r.result.witness->states << " states refutes it\n";
  }
  return exit_of(r.result.verdict);
}

int cmd_verify(const std::string& cfm_file, const std::string& spec_file) {
  Cfm cfm = import_cfm(slurp(cfm_file));
  auto ps = parse_spec(slurp(spec_file));
  if (auto cex = verify_cfm(cfm, ps.formula)) {
    std::cout << "FAIL\n" << describe(cfm, *cex);
    return 1;
  }
  std::cout << "PASS\n";
  return 0;
}

Value value_of(const json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) return j.get<std::string>();
  throw Error("trace values must be integers, Booleans or strings");
}

int cmd_sim(const std::string& cfm_file, const std::string& trace_file, const std::string& interp,
            std::size_t steps) {
  if (interp != "builtin") throw CLI::ValidationError("--interp", "only 'builtin' is available");
  Cfm cfm = import_cfm(slurp(cfm_file));
  Interpretation in = builtin_interpretation();
  if (!trace_file.empty()) {
    json trace = json::parse(slurp(trace_file));
    if (trace.contains("inits")) {
      for (const auto& [name, v] : trace["inits"].items()) in.inits[name] = value_of(v);
    }
    if (trace.contains("inputs")) {
      for (const auto& [name, vs] : trace["inputs"].items()) {
        std::vector<Value> values;
        for (const auto& v : vs) values.push_back(value_of(v));
        if (values.empty()) throw Error("input '" + name + "' has an empty trace");
        in.inputs[name] = [values](std::size_t t) { return values[std::min(t, values.size() - 1)]; };
      }
    }
  }
  CfmRun run = cfm_run(cfm, in, steps);
  for (std::size_t t = 0; t < run.steps.size(); ++t) {
    std::cout << "t=" << t << " state=" << run.states[t];
    for (const auto& [s, v] : run.values[t]) std::cout << " " << s << "=" << to_string(v);
    std::cout << "\n";
  }
  return 0;
}

int cmd_codegen(const std::string& cfm_file, const std::string& out, const std::string& module) {
  Cfm cfm = import_cfm(slurp(cfm_file));
  CodegenOptions opts;
  opts.module_name = module;
  std::string text = generate_frp(cfm, opts);
  if (auto bad = validate_frp(text)) throw Error("generated program is malformed: " + *bad);
  emit(out, text);
  return 0;
}

int cmd_norm2(const std::string& file) {
  auto ps = parse_spec(slurp(file));
  Formula f = to_tsl2(ps.formula);
  if (!is_tsl2(f)) throw Error("normalization left an application of arity other than 2");
  std::cout << pretty(f) << "\n";
  return 0;
}

int cmd_stats(const std::string& file) {
  const std::string text = slurp(file);
  if (fs::path(file).extension() == ".json") {
    Cfm cfm = import_cfm(text);
    auto s = cfm_stats(cfm);
    json j{{"states", s.states},         {"inputs", s.inputs},
           {"outputs", s.outputs},       {"predicates", s.n_predicates},
           {"functions", s.n_functions}, {"conditionals", count_conditionals(cfm)}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  auto ps = parse_spec(text);
  json j{{"inputs", ps.symbols.inputs.size()},
         {"outputs", ps.symbols.outputs.size()},
         {"predicates", ps.symbols.predicates.size()},
         {"functions", ps.symbols.functions.size()},
         {"size", subformula_count(ps.formula)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_pcp(const std::string& file) {
  Formula f = pcp_formula(parse_pcp(slurp(file)));
  std::cout << pretty(f) << "\n";
  return 0;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

int cmd_bench(const std::string& dir, const std::string& filter, bool counters) {
  json expected = json::object();
  if (fs::exists(fs::path(dir) / "expected.json")) {
    expected = json::parse(slurp((fs::path(dir) / "expected.json").string()));
  }
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".tsl") files.push_back(e.path());
    }
  } else {
    throw FileError("no benchmark directory '" + dir + "'");
  }
  std::sort(files.begin(), files.end());

  const Limits limits = limits_from_env();
  std::vector<std::vector<std::string>> rows{
      {"benchmark", "|S_I|", "|S_O|", "|N_P|", "|N_F|", "|phi|", "|M|", "time(s)", "cond",
       "verdict", "paper |M|", "expected"}};
  bool all_ok = true;
  auto paper = [&](const std::string& name) {
    if (!expected.contains(name) || !expected[name].contains("paper_states")) return std::string("-");
    return std::to_string(expected[name]["paper_states"].get<std::size_t>());
  };
  auto judge = [&](const std::string& name, Verdict v, std::optional<std::size_t> states) {
    if (!expected.contains(name)) return std::string("-");
    const auto& e = expected[name];
    bool ok = e.value("verdict", std::string(to_string(v))) == to_string(v);
    if (e.contains("states")) ok = ok && states && *states == e["states"].get<std::size_t>();
    all_ok = all_ok && ok;
    return std::string(ok ? "ok" : "MISMATCH");
  };
  for (const auto& path : files) {
    const std::string name = path.stem().string();
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    Run r = synth_spec(slurp(path.string()), limits, false);
    const auto& st = r.parsed.symbols;
    std::optional<std::size_t> states;
    if (r.cfm) states = r.cfm->states;
    rows.push_back({name, std::to_string(st.inputs.size()), std::to_string(st.outputs.size()),
                    std::to_string(st.predicates.size()), std::to_string(st.functions.size()),
                    std::to_string(subformula_count(r.parsed.formula)),
                    states ? std::to_string(*states) : "-", fixed(r.seconds, 3),
                    r.cfm ? std::to_string(count_conditionals(*r.cfm)) : "-",
                    to_string(r.result.verdict), paper(name), judge(name, r.result.verdict, states)});
  }
  if (counters) {
    for (int bits = 1; bits <= 3; ++bits) {
      const std::string name = "counter-" + std::to_string(bits);
      if (!filter.empty() && name.find(filter) == std::string::npos) continue;
      auto t0 = std::chrono::steady_clock::now();
      auto res = synthesize(counter_ltl(bits), limits);
      double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::optional<std::size_t> states;
      if (res.machine) states = res.machine->states;
      rows.push_back({name, "1", std::to_string(bits), "-", "-", "-",
                      states ? std::to_string(*states) : "-", fixed(dt, 3), "-",
                      to_string(res.verdict), paper(name), judge(name, res.verdict, states)});
    }
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      std::cout << (c ? "  " : "") << std::left << std::setw(int(width[c])) << r[c];
    }
    std::cout << "\n";
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesis of functional reactive programs from temporal stream logic"};
  app.require_subcommand(1);

  std::string spec_file, cfm_file, out, limits_text, mealy_in, trace_file, module = "Controller";
  std::string interp = "builtin", dir = "benchmarks", filter;
  bool tlsf = false, as_json = false, purity = false, verify = false, counters = true;
  std::size_t steps = 10;

  auto* check = app.add_subcommand("check", "parse and classify a specification");
  check->add_option("spec", spec_file)->required();

  auto* enc = app.add_subcommand("encode", "print the LTL encoding");
  enc->add_option("spec", spec_file)->required();
  auto* tlsf_flag = enc->add_flag("--tlsf", tlsf, "emit TLSF");
  enc->add_flag("--json", as_json, "emit JSON")->excludes(tlsf_flag);

  auto* syn = app.add_subcommand("synth", "synthesize a control flow model");
  syn->add_option("spec", spec_file)->required();
  syn->add_option("--limits", limits_text, "e.g. bound=4,states=400000,seconds=120");
  syn->add_option("--mealy-in", mealy_in, "use a Mealy machine from another synthesizer");
  syn->add_option("-o,--output", out, "CFM JSON destination");
  syn->add_flag("--purity", purity, "assume predicates over constants never change");
  syn->add_flag("--verify", verify, "model check the result before writing it");

  auto* ver = app.add_subcommand("verify", "model check a CFM against a specification");
  ver->add_option("cfm", cfm_file)->required();
  ver->add_option("spec", spec_file)->required();

  auto* sim = app.add_subcommand("sim", "simulate a CFM");
  sim->add_option("cfm", cfm_file)->required();
  sim->add_option("--trace", trace_file, "JSON with per-signal input values and inits");
  sim->add_option("--interp", interp);
  sim->add_option("--steps", steps);

  auto* gen = app.add_subcommand("codegen", "generate an FRP program");
  gen->add_option("cfm", cfm_file)->required();
  gen->add_option("-o,--output", out);
  gen->add_option("--module", module);

  auto* norm = app.add_subcommand("norm2", "rewrite to the binary fragment");
  norm->add_option("spec", spec_file)->required();

  auto* stats = app.add_subcommand("stats", "size statistics of a specification or CFM");
  stats->add_option("file", spec_file)->required();

  auto* pcp = app.add_subcommand("pcp", "formula for a Post correspondence instance");
  pcp->add_option("instance", spec_file)->required();

  auto* bench = app.add_subcommand("bench", "run the benchmark corpus");
  bench->add_option("--filter", filter);
  bench->add_option("--dir", dir);
  bench->add_flag("!--no-counters", counters, "skip the LTL counter rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*check) return cmd_check(spec_file);
    if (*enc) return cmd_encode(spec_file, tlsf, as_json);
    if (*syn) return cmd_synth(spec_file, limits_text, mealy_in, out, purity, verify);
    if (*ver) return cmd_verify(cfm_file, spec_file);
    if (*sim) return cmd_sim(cfm_file, trace_file, interp, steps);
    if (*gen) return cmd_codegen(cfm_file, out, module);
    if (*norm) return cmd_norm2(spec_file);
    if (*stats) return cmd_stats(spec_file);
    if (*pcp) return cmd_pcp(spec_file);
    if (*bench) return cmd_bench(dir, filter, counters);
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFile;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "Unknown (" << e.what() << ")\n";
    return kUnknown;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
