// robtherm: robustness solves, witness extraction, protocol traces, bound
// verification, channel reports and parameter sweeps from scenario files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "robtherm/json_io.hpp"
#include "robtherm/scenario.hpp"

namespace fs = std::filesystem;
using namespace robtherm;

namespace {

struct Common {
    std::string input;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--input", c.input, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output directory (stdout when omitted)");
    cmd->add_option("--seed", c.seed, "Override the scenario seed");
    cmd->add_option("--tol", c.tol, "Override the solver tolerance")->check(CLI::PositiveNumber);
}

Scenario load(const Common& c) {
    Scenario s = load_scenario(c.input);
    if (c.seed) s.seed = c.seed;
    if (c.tol) s.tol.solver = *c.tol;
    return s;
}

void emit(const std::string& out_dir, const std::string& file, const std::string& text) {
    if (out_dir.empty()) {
        std::cout << text;
        return;
    }
    fs::create_directories(out_dir);
    const fs::path path = fs::path(out_dir) / file;
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    os << text;
    std::cerr << "wrote " << path.string() << "\n";
}

void emit_json(const std::string& out_dir, const std::string& file, const Json& j) { emit(out_dir, file, j.dump(2) + "\n"); }

struct Pair {
    std::string state;
    std::string free_set;
    DensityMatrix rho;
    std::optional<PureState> psi;
    std::optional<FreeSetSpec> spec;  // empty on the closed-form path
};

std::vector<Pair> pairs(const Scenario& s) {
    std::vector<Pair> out;
    for (std::size_t i = 0; i < s.states.size(); ++i) {
        const StateSpec& st = s.states[i];
        const std::uint64_t seed = s.seed.value_or(0) + i;
        for (const auto& f : s.free_sets) {
            if (st.d > kSdpMaxDim) {
                auto psi = st.pure(seed);
                out.push_back({st.label(), "incoherent(" + std::to_string(st.d) + ")",
                               DensityMatrix::from_pure(*psi), psi, std::nullopt});
            } else {
                FreeSetSpec spec = f.build(st.d);
                out.push_back({st.label(), spec.describe(), st.build(seed), st.pure(seed), spec});
            }
        }
    }
    return out;
}

int cmd_robustness(const Common& c) {
    const Scenario s = load(c);
    Json results = Json::array();
    bool converged = true;
    for (const auto& p : pairs(s)) {
        const RobustnessResult r = p.spec ? robustness_dual(p.rho, *p.spec, s.tol.solver) : coherence_closed_form(*p.psi);
        converged = converged && r.status == SolverStatus::Converged;
        Json item{{"state", p.state}, {"free_set", p.free_set}};
        item.update(to_json(r));
        if (p.spec) item["certificates"] = to_json(check_certificates(r, p.rho, *p.spec));
        results.push_back(std::move(item));
    }
    emit_json(c.out, "robustness.json", Json{{"scenario", s.name}, {"results", results}});
    return converged ? kExitOk : kExitNonConvergence;
}

int cmd_witness(const Common& c) {
    const Scenario s = load(c);
    Json results = Json::array();
    for (const auto& p : pairs(s)) {
        Json item{{"state", p.state}, {"free_set", p.free_set}};
        if (!p.spec) {
            const Rank1Witness w = coherence_rank1_witness(*p.psi);
            item["robustness"] = number_to_json(w.achieved);
            item["rank1"] = to_json(w);
        } else {
            const ProtocolWitness pw = protocol_witness(p.rho, *p.spec, s.tol.solver);
            item["robustness"] = number_to_json(pw.robustness);
            item["witness"] = matrix_to_json(pw.witness.matrix());
            item["rank1"] = pw.rank1 ? to_json(*pw.rank1) : Json(nullptr);
            item["status"] = to_string(pw.solve.status);
        }
        results.push_back(std::move(item));
    }
    emit_json(c.out, "witness.json", Json{{"scenario", s.name}, {"results", results}});
    return kExitOk;
}

int cmd_protocol(const Common& c) {
    const Scenario s = load(c);
    Json results = Json::array();
    for (const auto& p : pairs(s)) {
        if (!p.spec) throw InputError("states", "protocol traces need d <= " + std::to_string(kSdpMaxDim));
        const ProtocolWitness pw = protocol_witness(p.rho, *p.spec, s.tol.solver);
        for (double lambda : s.lambdas) {
            for (const auto& b : s.betas) {
                const ThermoContext ctx = ThermoContext::make(b.resolve(lambda, p.rho.dim()), lambda);
                const ProtocolTrace t = simulate_protocol(p.rho, pw.witness, ctx);
                Json item{{"state", p.state},
                          {"free_set", p.free_set},
                          {"lambda", lambda},
                          {"beta", beta_to_json(ctx.beta)},
                          {"robustness", number_to_json(pw.robustness)},
                          {"achieved_ratio", number_to_json(achieved_advantage(p.rho, pw.witness, *p.spec, ctx))}};
                item.update(to_json(t));
                results.push_back(std::move(item));
            }
        }
    }
    emit_json(c.out, "protocol.json", Json{{"scenario", s.name}, {"results", results}});
    return kExitOk;
}

int cmd_verify(const Common& c) {
    const Scenario s = load(c);
    const RunReport r = run_scenario(s);
    emit_json(c.out, "report.json", to_json(r));
    std::cerr << s.name << ": " << r.checks.size() << " checks, " << r.failed() << " failed, " << r.skipped()
              << " skipped, " << r.nonconverged() << " non-converged solves\n";
    return r.exit_code();
}

int cmd_channel(const Common& c) {
    Scenario s = load(c);
    if (!s.channel) throw InputError("channel", "missing required field");
    const QuantumChannel ch = s.channel->build();
    const ChoiState choi = choi_state(ch);
    Json j{{"scenario", s.name}, {"channel", s.channel->label()}, {"choi", matrix_to_json(choi.state().matrix())}};

    Scenario run = s;
    run.states.clear();
    run.checks.clear();
    if (s.channel->input) run.checks.push_back(CheckKind::Theorem3);
    run.checks.push_back(CheckKind::Theorem4);
    const RunReport r = run_scenario(run);
    for (const auto& e : r.robustness) {
        Json rl{{"free_set", e.free_set}};
        rl.update(to_json(e.result));
        j["robustness_lower"] = std::move(rl);
    }
    Json bounds = Json::array();
    for (const auto& e : r.checks) {
        Json item{{"lambda", e.lambda}, {"beta", beta_to_json(e.beta)}, {"free_set", e.free_set}};
        item.update(to_json(e.report));
        bounds.push_back(std::move(item));
    }
    j["bounds"] = std::move(bounds);
    emit_json(c.out, "channel.json", j);
    return r.exit_code();
}

int cmd_sweep(const Common& c) {
    const Scenario s = load(c);
    emit(c.out, "sweep.csv", to_csv(sweep(s)));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robustness, witness-Hamiltonian work extraction and cost bounds"};
    app.require_subcommand(1);

    Common common;
    const std::pair<const char*, const char*> verbs[] = {
        {"robustness", "Solve the robustness program with certificates"},
        {"witness", "Optimal witness and its rank-one reduction"},
        {"protocol", "Per-stage work of the extraction cycle"},
        {"verify", "Run the scenario checks and write a JSON report"},
        {"channel", "Choi state, channel robustness lower bound and cost bounds"},
        {"sweep", "Grid sweep written as CSV"},
    };
    for (const auto& [name, help] : verbs) add_common(app.add_subcommand(name, help), common);

    auto* freeset = app.add_subcommand("freeset", "Free-set utilities");
    auto* dump = freeset->add_subcommand("dump", "Write the extreme points of a free set");
    freeset->require_subcommand(1);
    std::string kind;
    int n = 1;
    long long dim = 2;
    std::string out_dir;
    dump->add_option("--kind", kind, "incoherent or stabilizer")->required()->check(CLI::IsMember({"incoherent", "stabilizer"}));
    dump->add_option("--n", n, "Qubit count for stabilizer sets")->check(CLI::Range(1, 3));
    dump->add_option("--d", dim, "Dimension for incoherent sets")->check(CLI::Range(2, 4096));
    dump->add_option("--out", out_dir, "Output directory (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string verb = app.get_subcommands().front()->get_name();
        if (verb == "robustness") return cmd_robustness(common);
        if (verb == "witness") return cmd_witness(common);
        if (verb == "protocol") return cmd_protocol(common);
        if (verb == "verify") return cmd_verify(common);
        if (verb == "channel") return cmd_channel(common);
        if (verb == "sweep") return cmd_sweep(common);
        const FreeSetSpec spec = kind == "stabilizer" ? FreeSetSpec::stabilizer(n) : FreeSetSpec::incoherent(dim);
        emit_json(out_dir, "freeset.json", free_set_to_json(spec));
        return kExitOk;
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
