#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "asmw/analysis.hpp"
#include "asmw/logic.hpp"
#include "asmw/parser.hpp"
#include "asmw/printer.hpp"
#include "asmw/proof.hpp"
#include "asmw/sampler.hpp"
#include "asmw/semantics.hpp"
#include "asmw/translate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw asmw::InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void require_compatible(const asmw::State& s, const asmw::SigContext& ctx) {
    std::string why;
    if (!s.sig().extends(ctx.sig, &why))
        throw asmw::InputError("state signature incompatible: " + why);
    for (const auto& [name, sort] : ctx.atoms) {
        asmw::Value v = s.carriers().id(name);
        if (v == asmw::kNoValue || !s.carriers().in_sort(v, sort))
            throw asmw::InputError("declared atom '" + name + "' missing from the state carriers");
    }
}

std::string print_dynamics(const asmw::State& s) {
    std::ostringstream os;
    const asmw::Carriers& c = s.carriers();
    for (size_t fi = 0; fi < s.sig().size(); ++fi) {
        const asmw::FunctionDecl& d = s.sig().decl(static_cast<int>(fi));
        if (!d.dynamic) continue;
        for (asmw::Value a : c.values_of(asmw::Signature::arg_sort(d.kind)))
            os << "  " << d.name << "(" << c.name(a)
               << ") = " << c.name(s.lookup1(static_cast<int>(fi), a)) << "\n";
    }
    return os.str();
}

json dynamics_json(const asmw::State& s) {
    json out = json::object();
    const asmw::Carriers& c = s.carriers();
    for (size_t fi = 0; fi < s.sig().size(); ++fi) {
        const asmw::FunctionDecl& d = s.sig().decl(static_cast<int>(fi));
        if (!d.dynamic) continue;
        json rows = json::object();
        for (asmw::Value a : c.values_of(asmw::Signature::arg_sort(d.kind)))
            rows[c.name(a)] = c.name(s.lookup1(static_cast<int>(fi), a));
        out[d.name] = rows;
    }
    return out;
}

void apply_bindings(asmw::Valuation& val, const std::vector<std::string>& binds,
                    const asmw::State& s) {
    for (const std::string& b : binds) {
        size_t eq = b.find('=');
        if (eq == std::string::npos) throw asmw::InputError("bad --bind '" + b + "'");
        std::string lhs = b.substr(0, eq);
        std::string rhs = b.substr(eq + 1);
        if (lhs.rfind("%%", 0) == 0) {
            val.bind_pred2(lhs.substr(2), asmw::parse_tagged_set_literal(rhs, s));
        } else if (lhs.rfind('%', 0) == 0) {
            val.bind_pred1(lhs.substr(1), asmw::parse_update_set_literal(rhs, s));
        } else {
            bool sort2 = lhs.rfind('$', 0) == 0;
            std::string name = sort2 ? lhs.substr(1) : lhs;
            asmw::Value v = s.carriers().id(rhs);
            if (v == asmw::kNoValue) throw asmw::InputError("unknown atom '" + rhs + "'");
            val.bind_ind(name, sort2 ? asmw::VarSort::Ind2 : asmw::VarSort::Ind1, v);
        }
    }
}

struct CapsFlags {
    asmw::Caps caps;
    void attach(CLI::App* cmd) {
        cmd->add_option("--max-family", caps.max_family, "cap on update sets per family");
        cmd->add_option("--max-set", caps.max_set, "cap on updates per update set");
        cmd->add_option("--max-pred-enum", caps.max_pred_enum,
                        "cap on predicate-sort enumeration");
        cmd->add_option("--max-nodes", caps.max_formula_nodes, "cap on translated formula size");
    }
};

int cmd_step(const std::string& machine_file, const std::string& state_file, bool json_out,
             const asmw::Caps& caps) {
    asmw::ParsedRule pr = asmw::parse_rule(read_file(machine_file));
    asmw::State s = asmw::parse_state(read_file(state_file));
    require_compatible(s, pr.ctx);
    if (!asmw::is_closed(pr.rule)) throw asmw::InputError("machine rule must be closed");
    asmw::Valuation val;
    asmw::UpdateSetFamily fam = asmw::delta(s, pr.rule, val, caps);
    std::vector<asmw::State> succ = asmw::successors(s, pr.rule, caps);
    if (json_out) {
        json out;
        out["family_size"] = fam.size();
        json sets = json::array();
        for (const asmw::UpdateSet& u : fam) {
            json e;
            json ups = json::array();
            for (const asmw::Update& up : u)
                ups.push_back({s.sig().decl(up.fn).name, s.carriers().name(up.arg),
                               s.carriers().name(up.value)});
            e["updates"] = ups;
            e["consistent"] = asmw::is_consistent(u);
            sets.push_back(e);
        }
        out["family"] = sets;
        out["successor_count"] = succ.size();
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "family size: " << fam.size() << "\n";
        for (const asmw::UpdateSet& u : fam)
            std::cout << "  " << asmw::print(s, u) << "  "
                      << (asmw::is_consistent(u) ? "consistent" : "inconsistent") << "\n";
        std::cout << "successors: " << succ.size() << "\n";
    }
    return kExitOk;
}

int cmd_run(const std::string& machine_file, const std::string& state_file, int max_steps,
            const std::string& mode, uint64_t seed, bool json_out, const asmw::Caps& caps) {
    asmw::Machine m = asmw::parse_machine(read_file(machine_file));
    asmw::State s0 = asmw::parse_state(read_file(state_file));
    require_compatible(s0, m.ctx);
    if (!asmw::is_closed(m.rule)) throw asmw::InputError("machine rule must be closed");
    if (!asmw::state_satisfies(s0, m.init, caps))
        throw asmw::InputError("initial state does not satisfy the machine's init predicate");
    asmw::RunMode rm = mode == "sample" ? asmw::RunMode::Sample : asmw::RunMode::All;
    asmw::RunReport rep = asmw::run(m, s0, max_steps, rm, seed, caps);
    if (json_out) {
        json out;
        out["mode"] = mode;
        out["trace_count"] = rep.trace_count;
        out["max_depth"] = rep.max_depth_explored;
        out["hit_step_cap"] = rep.hit_step_cap;
        json terms = json::array();
        for (const asmw::State& t : rep.terminal_states) terms.push_back(dynamics_json(t));
        out["terminal_states"] = terms;
        json stuck = json::array();
        for (const asmw::State& t : rep.stuck_states) stuck.push_back(dynamics_json(t));
        out["stuck_states"] = stuck;
        if (rm == asmw::RunMode::Sample) {
            json trace = json::array();
            for (const asmw::State& t : rep.sample_trace) trace.push_back(dynamics_json(t));
            out["trace"] = trace;
            out["reached_final"] = rep.sample_reached_final;
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "terminal states: " << rep.terminal_states.size() << "\n";
        for (const asmw::State& t : rep.terminal_states)
            std::cout << "terminal:\n" << print_dynamics(t);
        if (!rep.stuck_states.empty()) {
            std::cout << "stuck states (no successor): " << rep.stuck_states.size() << "\n";
            for (const asmw::State& t : rep.stuck_states)
                std::cout << "stuck:\n" << print_dynamics(t);
        }
        std::cout << "traces (<= " << max_steps << " steps): " << rep.trace_count << "\n";
        if (rep.hit_step_cap) std::cout << "non-terminating within step bound\n";
        if (rm == asmw::RunMode::Sample) {
            std::cout << "sampled trace length: " << rep.sample_trace.size() - 1 << "\n";
            std::cout << (rep.sample_reached_final ? "reached a final state\n"
                                                   : "did not reach a final state\n");
        }
    }
    if (rm == asmw::RunMode::All && rep.terminal_states.empty() && !rep.stuck_states.empty() &&
        !json_out)
        std::cout << "diagnostic: stuck\n";
    return kExitOk;
}

int cmd_eval(const std::string& formula_file, const std::string& state_file,
             const std::vector<std::string>& binds, bool json_out, const asmw::Caps& caps) {
    asmw::ParsedFormula pf = asmw::parse_lformula(read_file(formula_file));
    asmw::State s = asmw::parse_state(read_file(state_file));
    require_compatible(s, pf.ctx);
    asmw::Valuation val;
    apply_bindings(val, binds, s);
    bool value = asmw::eval_formula(s, pf.formula, val, caps);
    if (json_out) {
        json out;
        out["value"] = value;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << (value ? "true" : "false") << "\n";
    }
    return value ? kExitOk : kExitFalse;
}

int cmd_translate(const std::string& formula_file, const std::string& out_file, bool json_out,
                  const asmw::Caps& caps) {
    asmw::ParsedFormula pf = asmw::parse_lformula(read_file(formula_file));
    asmw::TranslateSummary summary;
    asmw::Formula lin = asmw::to_lin(pf.formula, pf.ctx, caps, &summary);
    std::string text = asmw::print_formula_file(pf.ctx, lin);
    json jsummary;
    jsummary["nodes_in"] = summary.nodes_in;
    jsummary["nodes_out"] = summary.nodes_out;
    jsummary["iterations"] = summary.iterations;
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) throw asmw::InputError("cannot write '" + out_file + "'");
        out << text;
        std::cout << jsummary.dump(2) << "\n";
    } else if (json_out) {
        json out;
        out["formula"] = asmw::print(lin);
        out["summary"] = jsummary;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << text;
        std::cout << "// summary: " << jsummary.dump() << "\n";
    }
    return kExitOk;
}

int cmd_check_axioms(const std::string& schema, int trials, uint64_t seed, bool json_out,
                     const asmw::Caps& caps) {
    std::vector<std::string> ids;
    if (schema == "all") {
        ids = asmw::axiom_schema_ids();
        // E is meta-hypothetical (requires rule equivalence); it is exercised
        // by the proof checker instead.
        ids.erase(std::remove(ids.begin(), ids.end(), "E"), ids.end());
    } else if (schema == "controls") {
        ids = asmw::control_schema_ids();
    } else {
        ids.push_back(schema);
    }
    bool any_counterexamples = false;
    json jreports = json::array();
    for (const std::string& id : ids) {
        asmw::SchemaReport rep = asmw::validate_schema(id, trials, seed, caps);
        any_counterexamples = any_counterexamples || rep.counterexamples > 0;
        if (json_out) {
            json jr;
            jr["schema"] = rep.schema;
            jr["trials"] = rep.trials;
            jr["counterexamples"] = rep.counterexamples;
            jr["resource_skips"] = rep.resource_skips;
            jr["seed"] = rep.seed;
            json ex = json::array();
            for (const asmw::Counterexample& c : rep.examples) ex.push_back(c.description);
            jr["examples"] = ex;
            jreports.push_back(jr);
        } else {
            std::cout << "schema=" << rep.schema << " trials=" << rep.trials
                      << " counterexamples=" << rep.counterexamples
                      << " skips=" << rep.resource_skips << " seed=" << rep.seed << "\n";
            for (const asmw::Counterexample& c : rep.examples)
                std::cout << "  counterexample: " << c.description << "\n";
        }
    }
    if (json_out) std::cout << jreports.dump(2) << "\n";
    return any_counterexamples ? kExitFalse : kExitOk;
}

int cmd_prove_check(const std::string& derivation_file, bool json_out, const asmw::Caps& caps) {
    asmw::Derivation d = asmw::parse_derivation(read_file(derivation_file));
    asmw::CheckContext cctx;
    cctx.caps = caps;
    fs::path dir = fs::path(derivation_file).parent_path();
    for (const asmw::DerivationLine& line : d.lines)
        for (const std::string& f : line.just.cert.state_files) {
            bool seen = false;
            for (const auto& [name, st] : cctx.certificate_states) seen = seen || name == f;
            if (!seen)
                cctx.certificate_states.emplace_back(f,
                                                     asmw::parse_state(read_file((dir / f).string())));
        }
    asmw::CheckResult res = asmw::check(d, cctx);
    if (json_out) {
        json out;
        out["result"] = res.status == asmw::CheckResult::Status::Ok ? "ok"
                        : res.status == asmw::CheckResult::Status::OkModuloCertificates
                            ? "ok-modulo-certificates"
                            : "rejected";
        if (res.error) {
            out["line"] = res.error->line;
            out["reason"] = res.error->reason;
        }
        std::cout << out.dump(2) << "\n";
    } else {
        if (res.ok()) {
            for (const asmw::DerivationLine& line : d.lines)
                std::cout << "line " << line.number << ": ok\n";
            std::cout << (res.status == asmw::CheckResult::Status::Ok
                              ? "ok\n"
                              : "ok-modulo-certificates\n");
        } else {
            std::cout << "line " << res.error->line << ": " << res.error->reason << "\n";
            std::cout << "rejected\n";
        }
    }
    return res.ok() ? kExitOk : kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for non-deterministic parallel abstract state machines"};
    app.require_subcommand(1);

    std::string machine_file, state_file, formula_file, derivation_file, out_file;
    std::string mode = "all", schema = "all";
    int max_steps = 100, trials = 100;
    uint64_t seed = 0;
    bool json_out = false;
    std::vector<std::string> binds;

    CapsFlags caps_step, caps_run, caps_eval, caps_translate, caps_axioms, caps_prove;

    CLI::App* step = app.add_subcommand("step", "one-step update-set families and successors");
    step->add_option("machine", machine_file)->required();
    step->add_option("state", state_file)->required();
    step->add_flag("--json", json_out);
    caps_step.attach(step);

    CLI::App* runc = app.add_subcommand("run", "bounded runs to final states");
    runc->add_option("machine", machine_file)->required();
    runc->add_option("state", state_file)->required();
    runc->add_option("--max-steps", max_steps);
    runc->add_option("--mode", mode)->check(CLI::IsMember({"all", "sample"}));
    runc->add_option("--seed", seed);
    runc->add_flag("--json", json_out);
    caps_run.attach(runc);

    CLI::App* evalc = app.add_subcommand("eval", "evaluate a formula on a state");
    evalc->add_option("formula", formula_file)->required();
    evalc->add_option("state", state_file)->required();
    evalc->add_option("--bind", binds, "variable binding, e.g. x=v1 or %X={(T,e12,true)}");
    evalc->add_flag("--json", json_out);
    caps_eval.attach(evalc);

    CLI::App* transc = app.add_subcommand("translate", "translate into the upd/modal-free fragment");
    transc->add_option("formula", formula_file)->required();
    transc->add_option("-o,--output", out_file);
    transc->add_flag("--json", json_out);
    caps_translate.attach(transc);

    CLI::App* axc = app.add_subcommand("check-axioms", "random validity trials for the axiom schemas");
    axc->add_option("--schema", schema, "schema id, 'all', or 'controls'");
    axc->add_option("--trials", trials);
    axc->add_option("--seed", seed);
    axc->add_flag("--json", json_out);
    caps_axioms.attach(axc);

    CLI::App* provec = app.add_subcommand("prove-check", "check a derivation file");
    provec->add_option("derivation", derivation_file)->required();
    provec->add_flag("--json", json_out);
    caps_prove.attach(provec);

    CLI11_PARSE(app, argc, argv);

    try {
        if (step->parsed()) return cmd_step(machine_file, state_file, json_out, caps_step.caps);
        if (runc->parsed())
            return cmd_run(machine_file, state_file, max_steps, mode, seed, json_out,
                           caps_run.caps);
        if (evalc->parsed())
            return cmd_eval(formula_file, state_file, binds, json_out, caps_eval.caps);
        if (transc->parsed())
            return cmd_translate(formula_file, out_file, json_out, caps_translate.caps);
        if (axc->parsed()) return cmd_check_axioms(schema, trials, seed, json_out, caps_axioms.caps);
        if (provec->parsed()) return cmd_prove_check(derivation_file, json_out, caps_prove.caps);
    } catch (const asmw::ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const asmw::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
