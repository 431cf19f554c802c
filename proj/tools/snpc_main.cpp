// snpc: simulate SN P systems, build linear-function instances, manage
// ElGamal keys, and run the privacy-preserving compute protocol as either
// side.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "snpc/dsl.hpp"
#include "snpc/net.hpp"
#include "snpc/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNetwork = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

snpc::Natural parse_natural(const std::string& text, const char* what) {
  try {
    return snpc::from_dec(text);
  } catch (const snpc::DomainError&) {
    throw UsageError(std::string(what) + " must be a decimal natural, got '" +
                     text + "'");
  }
}

std::pair<std::string, std::uint16_t> parse_host_port(const std::string& text) {
  size_t colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size())
    throw UsageError("expected host:port, got '" + text + "'");
  unsigned long port = 0;
  try {
    port = std::stoul(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("bad port in '" + text + "'");
  }
  if (port > 65535) throw UsageError("port out of range in '" + text + "'");
  return {text.substr(0, colon), static_cast<std::uint16_t>(port)};
}

snpc::num::Rng make_rng(const std::optional<std::uint64_t>& seed) {
  return seed ? snpc::num::Rng(*seed) : snpc::num::Rng::from_entropy();
}

snpc::proto::Mode parse_mode(const std::string& text) {
  if (text == "literal") return snpc::proto::Mode::Literal;
  if (text == "events") return snpc::proto::Mode::Events;
  if (text == "closed") return snpc::proto::Mode::Closed;
  throw UsageError("unknown mode '" + text + "'");
}

snpc::SnpSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw snpc::DomainError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  snpc::dsl::ParseResult result = snpc::dsl::parse_system(buffer.str());
  if (auto* err = std::get_if<snpc::dsl::ParseError>(&result))
    throw snpc::DomainError(path + ": " + err->message());
  return std::get<snpc::SnpSystem>(result);
}

void print_trace_step(const snpc::SnpSystem& sys, const snpc::StepEvents& ev) {
  auto id = [&sys](size_t i) { return sys.neurons[i].id; };
  for (const auto& f : ev.fired)
    std::cout << "step " << snpc::to_dec(ev.step) << ": " << id(f.neuron)
              << " fires (consumes " << snpc::to_dec(f.consumed) << ", emits at "
              << snpc::to_dec(f.emits_at) << ")\n";
  for (const auto& f : ev.forgot)
    std::cout << "step " << snpc::to_dec(ev.step) << ": " << id(f.neuron)
              << " forgets " << snpc::to_dec(f.removed) << "\n";
  for (const auto& r : ev.released)
    std::cout << "step " << snpc::to_dec(ev.step) << ": " << id(r.neuron)
              << " releases" << (r.output ? " (output)" : "") << "\n";
  for (const auto& d : ev.deliveries)
    std::cout << "step " << snpc::to_dec(ev.step) << ": " << id(d.from) << " -> "
              << id(d.to) << (d.lost ? " (lost, closed)" : "") << "\n";
}

void print_trace_summary(const snpc::SpikeTrace& trace) {
  std::cout << "emissions:";
  for (const snpc::Natural& e : trace.emissions) std::cout << " " << snpc::to_dec(e);
  std::cout << "\n";
  if (trace.emissions.size() == 2) {
    std::cout << "interval: " << snpc::to_dec(trace.emissions[1] - trace.emissions[0])
              << "\n";
  } else if (trace.emissions.size() > 2) {
    std::cout << "intervals:";
    for (size_t i = 1; i < trace.emissions.size(); ++i)
      std::cout << " " << snpc::to_dec(trace.emissions[i] - trace.emissions[i - 1]);
    std::cout << "\n";
  }
  std::cout << "halted: " << (trace.halted ? "true" : "false")
            << " (clock " << snpc::to_dec(trace.final_clock) << ")\n";
}

int cmd_simulate(const std::string& file, const std::string& mode_text,
                 const std::string& budget_text, bool with_trace) {
  snpc::SnpSystem sys = load_system(file);
  snpc::Natural budget =
      budget_text.empty() ? snpc::Natural(1) << 20 : parse_natural(budget_text, "--budget");
  if (budget < 1) throw UsageError("--budget must be >= 1");

  if (with_trace) {
    // The per-step log always comes from the literal engine; both engines
    // produce the same observable trace.
    snpc::SystemState state = snpc::SystemState::initial(sys);
    snpc::SpikeTrace trace;
    while (!snpc::is_halted(state, sys) && state.clock < budget) {
      snpc::StepEvents ev = snpc::step(state, sys, snpc::Policy::Strict);
      print_trace_step(sys, ev);
      for (const auto& r : ev.released)
        if (r.output) trace.emissions.push_back(ev.step);
    }
    trace.halted = snpc::is_halted(state, sys);
    trace.steps_executed = state.clock;
    trace.final_clock = state.clock;
    print_trace_summary(trace);
    return kExitOk;
  }

  snpc::SpikeTrace trace = mode_text == "events"
                               ? snpc::run_events(sys, budget)
                               : snpc::run(sys, budget);
  print_trace_summary(trace);
  return kExitOk;
}

int cmd_pi_add(const std::string& t1, const std::string& t2, const std::string& k,
               const std::string& mode_text, const std::string& budget_text) {
  snpc::LinParams params = snpc::LinParams::make(parse_natural(t1, "--t1"),
                                                 parse_natural(t2, "--t2"),
                                                 parse_natural(k, "--k"));
  snpc::Natural budget = budget_text.empty() ? snpc::default_budget(params)
                                             : parse_natural(budget_text, "--budget");
  snpc::EngineMode engine = mode_text == "events" ? snpc::EngineMode::Events
                                                  : snpc::EngineMode::Literal;
  snpc::Natural interval = snpc::eval_linear(params, engine, budget);
  if (interval != snpc::linfun_oracle(params)) {
    std::cerr << "engine interval " << snpc::to_dec(interval)
              << " disagrees with the closed form "
              << snpc::to_dec(snpc::linfun_oracle(params)) << "\n";
    return kExitDomain;
  }
  std::cout << snpc::to_dec(interval) << "\n";
  return kExitOk;
}

int cmd_keygen(unsigned bits, const std::string& out_params,
               const std::string& out_pub, const std::string& out_sec,
               const std::optional<std::uint64_t>& seed) {
  snpc::num::Rng rng = make_rng(seed);
  snpc::elg::GroupParams params = snpc::elg::generate_params(bits, rng);
  snpc::elg::KeyPair keys = snpc::elg::keygen(params, rng);
  snpc::elg::write_params_file(out_params, params);
  snpc::elg::write_public_key_file(out_pub, keys.h);
  snpc::elg::write_secret_key_file(out_sec, keys.x);
  std::cout << "group: p (" << bits << " bits) written to " << out_params
            << ", keys to " << out_pub << " / " << out_sec << "\n";
  return kExitOk;
}

int cmd_serve(const std::string& bind_text, const std::string& mode_text,
              const std::string& budget_text) {
  std::string bind = bind_text;
  if (bind.empty()) {
    const char* env = std::getenv("SNPC_BIND");
    if (!env || !*env)
      throw UsageError("no --bind given and SNPC_BIND is not set");
    bind = env;
  }
  auto [host, port] = parse_host_port(bind);
  snpc::proto::ServeOptions options;
  options.mode = parse_mode(mode_text);
  if (!budget_text.empty()) {
    snpc::Natural budget = parse_natural(budget_text, "--budget");
    if (budget < 1) throw UsageError("--budget must be >= 1");
    options.budgets.literal_steps = budget;
    options.budgets.events = budget;
  }
  snpc::proto::Server server(host, port, options);
  std::cout << "listening on " << host << ":" << server.port() << " (mode "
            << snpc::proto::mode_name(options.mode) << ")" << std::endl;
  server.wait();
  return kExitOk;
}

int cmd_compute(const std::string& server_text, const std::string& params_file,
                const std::string& t1, const std::string& t2, const std::string& k,
                const std::string& mode_text,
                const std::optional<std::uint64_t>& seed) {
  auto [host, port] = parse_host_port(server_text);
  snpc::elg::GroupParams params = snpc::elg::read_params_file(params_file);
  snpc::LinParams plain = snpc::LinParams::make(parse_natural(t1, "--t1"),
                                                parse_natural(t2, "--t2"),
                                                parse_natural(k, "--k"));
  snpc::num::Rng rng = make_rng(seed);
  snpc::proto::Prepared prep =
      snpc::proto::client_prepare(params, plain, parse_mode(mode_text), rng);
  snpc::proto::ComputeResponse resp =
      snpc::proto::compute_remote(host, port, prep.request);
  std::cout << snpc::to_dec(snpc::proto::client_finish(prep.session, resp)) << "\n";
  return kExitOk;
}

int cmd_selftest(const std::optional<std::uint64_t>& seed) {
  auto results = snpc::selftest::run_acceptance(
      seed.value_or(snpc::selftest::kDefaultSeed), std::cout);
  return snpc::selftest::all_passed(results) ? kExitOk : kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SN P system toolkit: simulation, the pi-add linear-function "
               "system, and the ElGamal-based private compute protocol"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "run a .snp system and print its trace");
  std::string sim_file, sim_mode = "literal", sim_budget;
  bool sim_trace = false;
  sim->add_option("file", sim_file, ".snp file")->required();
  sim->add_option("--mode", sim_mode)->check(CLI::IsMember({"literal", "events"}));
  sim->add_option("--budget", sim_budget, "step/event budget (default 2^20)");
  sim->add_flag("--trace", sim_trace, "print the per-step firing/emission log");

  auto* pi = app.add_subcommand("pi-add", "evaluate t1*k + t2 on the membrane system");
  std::string pi_t1, pi_t2, pi_k, pi_mode = "literal", pi_budget;
  pi->add_option("--t1", pi_t1)->required();
  pi->add_option("--t2", pi_t2)->required();
  pi->add_option("--k", pi_k)->required();
  pi->add_option("--mode", pi_mode)->check(CLI::IsMember({"literal", "events"}));
  pi->add_option("--budget", pi_budget);

  auto* keygen = app.add_subcommand("keygen", "generate group parameters and a key pair");
  unsigned kg_bits = 0;
  std::string kg_params, kg_pub, kg_sec;
  std::optional<std::uint64_t> kg_seed;
  keygen->add_option("--bits", kg_bits, "modulus bit length (>= 8)")->required();
  keygen->add_option("--out-params", kg_params)->required();
  keygen->add_option("--out-pub", kg_pub)->required();
  keygen->add_option("--out-sec", kg_sec)->required();
  keygen->add_option("--seed", kg_seed, "deterministic randomness (testing only)");

  auto* serve = app.add_subcommand("serve", "host the compute protocol server");
  std::string sv_bind, sv_mode = "closed", sv_budget;
  serve->add_option("--bind", sv_bind, "host:port (default from SNPC_BIND)");
  serve->add_option("--mode", sv_mode)
      ->check(CLI::IsMember({"literal", "events", "closed"}));
  serve->add_option("--budget", sv_budget, "simulation budget per request");

  auto* compute = app.add_subcommand("compute", "evaluate t1*k + t2 on a remote server");
  std::string cp_server, cp_params, cp_t1, cp_t2, cp_k, cp_mode = "closed";
  std::optional<std::uint64_t> cp_seed;
  compute->add_option("--server", cp_server, "host:port")->required();
  compute->add_option("--params", cp_params, "group parameters file")->required();
  compute->add_option("--t1", cp_t1)->required();
  compute->add_option("--t2", cp_t2)->required();
  compute->add_option("--k", cp_k)->required();
  compute->add_option("--mode", cp_mode)
      ->check(CLI::IsMember({"literal", "events", "closed"}));
  compute->add_option("--seed", cp_seed);

  auto* selftest = app.add_subcommand("selftest", "run the embedded acceptance vectors");
  std::optional<std::uint64_t> st_seed;
  selftest->add_option("--seed", st_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(sim_file, sim_mode, sim_budget, sim_trace);
    if (*pi) return cmd_pi_add(pi_t1, pi_t2, pi_k, pi_mode, pi_budget);
    if (*keygen) return cmd_keygen(kg_bits, kg_params, kg_pub, kg_sec, kg_seed);
    if (*serve) return cmd_serve(sv_bind, sv_mode, sv_budget);
    if (*compute)
      return cmd_compute(cp_server, cp_params, cp_t1, cp_t2, cp_k, cp_mode, cp_seed);
    if (*selftest) return cmd_selftest(st_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const snpc::proto::NetworkError& e) {
    std::cerr << "network error: " << e.what() << "\n";
    return kExitNetwork;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
