#ifndef ALO_CLI_HPP
#define ALO_CLI_HPP

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alo/io.hpp"
#include "alo/relation.hpp"
#include "alo/scenarios.hpp"

namespace alo {

enum class ExitCode : int { Ok = 0, Failed = 1, Usage = 2 };

namespace detail {

struct CliOptions {
    std::string scenario;
    std::optional<std::size_t> dim;
    std::vector<std::size_t> dims;
    std::optional<std::size_t> guard;
    std::optional<double> tol_relation, tol_eigen, tol_tail, tol_gram;
    std::string format = "table";
    std::string out;
    bool chains = false;
    std::optional<std::size_t> max_len;
    std::vector<std::string> params;
    std::string config;
    std::string h_path, z_path;
    std::string kind = "standard";
    int n_max = 3;
    std::string out_dir = ".";
};

inline ScenarioOverrides overrides_from(const CliOptions& opt, std::string& id)
{
    ScenarioOverrides o;
    if (!opt.config.empty()) {
        const std::string text = read_file(opt.config);
        const std::string from_file = parse_overrides(parse_text(text, opt.config), o, opt.config);
        if (id.empty()) id = from_file;
        else if (!from_file.empty() && from_file != id)
            throw FormatError(opt.config + ": model '" + from_file + "' does not match scenario '" + id + "'");
    }
    if (opt.dim) o.dims = std::vector<std::size_t>{*opt.dim};
    if (!opt.dims.empty()) o.dims = opt.dims;
    if (opt.guard) o.guard = opt.guard;
    if (opt.tol_relation) o.tol.relation = *opt.tol_relation;
    if (opt.tol_eigen) o.tol.eigen = *opt.tol_eigen;
    if (opt.tol_tail) o.tol.tail = *opt.tol_tail;
    if (opt.tol_gram) o.tol.gram = *opt.tol_gram;
    if (opt.max_len) o.max_len = opt.max_len;
    o.include_vectors = opt.chains;
    for (const auto& kv : opt.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw ParameterError("--param expects key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            o.params[key] = v;
        } catch (const std::logic_error&) {
            o.params[key] = value;
        }
    }
    return o;
}

inline void emit(const CliOptions& opt, const std::vector<ReportBundle>& bundles, std::ostream& out)
{
    std::ostringstream text;
    if (opt.format == "json") {
        json j = bundles.size() == 1 ? json(bundles.front()) : json(bundles);
        text << j.dump(2) << '\n';
    } else {
        for (std::size_t i = 0; i < bundles.size(); ++i) {
            if (i) text << '\n';
            write_table(text, bundles[i]);
        }
    }
    if (opt.out.empty()) out << text.str();
    else write_file(opt.out, text.str());
}

inline ExitCode summarize(const std::vector<ReportBundle>& bundles, std::ostream& err)
{
    bool ok = true;
    for (const auto& b : bundles)
        for (const auto* f : b.failures()) {
            ok = false;
            err << "FAILED " << b.scenario << ": " << f->identity << " [" << f->relation
                << "] residual " << format_sig(f->residual) << " > tolerance " << format_sig(f->tolerance) << '\n';
        }
    return ok ? ExitCode::Ok : ExitCode::Failed;
}

inline ReportBundle verify_files(const CliOptions& opt)
{
    const Operator H = read_operator(opt.h_path);
    const Operator Z = read_operator(opt.z_path);
    if (!H.basis().compatible(Z.basis()))
        throw FormatError(opt.z_path + ": basis does not match " + opt.h_path);
    RelationKind kind;
    if (opt.kind == "standard") kind = RelationKind::Standard;
    else if (opt.kind == "generalized") kind = RelationKind::Generalized;
    else throw ParameterError("--kind must be 'standard' or 'generalized'");
    const double tol = opt.tol_relation.value_or(Tolerances{}.relation);

    ReportBundle b{"verify", opt.h_path + " / " + opt.z_path, {}, {}};
    const auto rel = verify_relation(H, Z, kind, tol);
    b.add(relation_report(rel, "ladder_relation"));
    if (rel.hermitian_H && kind == RelationKind::Standard) b.add(lambda_real_check(rel, "Z"));
    for (auto& r : verify_derived_identities(rel, opt.n_max, tol)) b.add(std::move(r));
    b.extras["lambda"] = complex_json(rel.lambda);
    b.extras["kind"] = to_string(kind);
    b.extras["hermitian_H"] = rel.hermitian_H;
    return b;
}

/// Operators of a scenario's model, as written by `export`.
inline std::vector<Operator> export_operators(const std::string& id, const ScenarioOverrides& o)
{
    const std::size_t g1 = o.guard.value_or(12), g2 = o.guard.value_or(5);
    if (id == "fermion") {
        auto m = make_fermion(param(o, "omega", 1.0));
        return {m.H0.renamed("H"), m.c.renamed("Z")};
    }
    if (id == "boson") {
        auto [a, ad] = make_boson(dim1(o, 60), g1);
        return {(param(o, "omega", 1.0) * (ad * a)).renamed("H"), a.renamed("Z")};
    }
    if (id == "quon") {
        auto m = make_quon({param(o, "q", 0.5), param(o, "omega", 1.0)}, dim1(o, 60), g1);
        return {m.H0.renamed("H"), adjoint(m.b).renamed("Z")};
    }
    if (id == "gha-linear" || id == "gha-square-well") {
        const auto gp = id == "gha-linear"
                            ? GhaParams::linear(param(o, "slope", 1.0), param(o, "offset", 1.0), param(o, "e0", 0.0))
                            : GhaParams::square_well(param(o, "step", 1.0), param(o, "e0", 1.0));
        auto m = make_gha(gp, dim1(o, 60), g1);
        return {m.H0.renamed("H"), adjoint(m.d).renamed("Z")};
    }
    LadderModel lm;
    const PseudoBosonShift shift{param(o, "A", 0.7), param(o, "B", 0.4)};
    if (id == "pb1d") lm = make_pb1d(param(o, "omega", 1.0), shift, dim1(o, 60), g1);
    else if (id == "pb2d")
        lm = make_pb2d(param(o, "omega1", 1.0), param(o, "omega2", std::sqrt(2.0)), shift, dims2(o, {18, 18}), g2);
    else if (id == "ab2d") lm = make_ab_model(shift.A, shift.B, dims2(o, {18, 18}), g2).ladder;
    else if (id == "eps2d") {
        EpsilonModelParams ep;
        ep.eps = param(o, "eps", 0.3);
        ep.xi = param(o, "xi", 1.0) < 0 ? -1 : 1;
        lm = make_epsilon_model(ep, dims2(o, {28, 28}), g2).ladder;
    } else {
        throw ParameterError("unknown scenario '" + id + "'");
    }
    std::vector<Operator> ops{lm.H.renamed("H")};
    for (std::size_t j = 0; j < lm.Z.size(); ++j) ops.push_back(lm.Z[j].renamed("Z" + std::to_string(j + 1)));
    return ops;
}

} // namespace detail

/// Runs the command line `args` (without the program name). Returns the process exit code.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Abstract ladder operator verification toolkit", "alo"};
    app.require_subcommand(1);
    detail::CliOptions opt;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "table"}));
        cmd->add_option("--out", opt.out, "Write the report to this file instead of stdout");
    };
    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--dim", opt.dim, "Single-mode truncation dimension");
        cmd->add_option("--dims", opt.dims, "Per-mode dimensions, comma separated")->delimiter(',');
        cmd->add_option("--guard", opt.guard, "Guard band width (top levels excluded per mode)");
        cmd->add_option("--param", opt.params, "Model parameter key=value (repeatable)");
        cmd->add_option("--config", opt.config, "Scenario override file (JSON)");
    };
    auto add_tolerances = [&](CLI::App* cmd) {
        cmd->add_option("--tol-relation", opt.tol_relation, "Relation residual tolerance");
        cmd->add_option("--tol-eigen", opt.tol_eigen, "Eigen residual tolerance");
        cmd->add_option("--tol-tail", opt.tol_tail, "Tail-mass tolerance");
        cmd->add_option("--tol-gram", opt.tol_gram, "Biorthogonality tolerance");
    };

    auto* list = app.add_subcommand("list", "List the built-in scenarios");
    add_format(list);

    auto* run = app.add_subcommand("run", "Run a scenario ('all' runs the catalog)");
    run->add_option("scenario", opt.scenario, "Scenario id");
    add_format(run);
    add_overrides(run);
    add_tolerances(run);
    run->add_flag("--chains", opt.chains, "Include chain vectors in the JSON report");
    run->add_option("--max-len", opt.max_len, "Maximum chain length");

    auto* verify = app.add_subcommand("verify", "Verify a ladder relation for operators read from files");
    verify->add_option("--H", opt.h_path, "Operator file for H")->required();
    verify->add_option("--Z", opt.z_path, "Operator file for Z")->required();
    verify->add_option("--kind", opt.kind, "standard or generalized")
        ->check(CLI::IsMember({"standard", "generalized"}));
    verify->add_option("--n-max", opt.n_max, "Highest power in the derived identities");
    verify->add_option("--tol-relation", opt.tol_relation, "Relation residual tolerance");
    add_format(verify);

    auto* exp = app.add_subcommand("export", "Write a scenario's H and Z operators as JSON files");
    exp->add_option("scenario", opt.scenario, "Scenario id")->required();
    exp->add_option("--out-dir", opt.out_dir, "Directory for H.json, Z*.json");
    add_overrides(exp);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return static_cast<int>(ExitCode::Ok);
    } catch (const CLI::ParseError& e) {
        err << "alo: " << e.what() << '\n' << "run 'alo --help' for usage\n";
        return static_cast<int>(ExitCode::Usage);
    }

    try {
        if (list->parsed()) {
            if (opt.format == "json") {
                json j = json::array();
                for (const auto& s : list_scenarios())
                    j.push_back({{"id", s.id}, {"description", s.description}, {"dims", s.default_dims},
                                 {"guard", s.default_guard}});
                const std::string text = j.dump(2) + "\n";
                if (opt.out.empty()) out << text;
                else detail::write_file(opt.out, text);
            } else {
                std::ostringstream text;
                for (const auto& s : list_scenarios())
                    text << std::left << std::setw(18) << s.id << s.description << '\n';
                if (opt.out.empty()) out << text.str();
                else detail::write_file(opt.out, text.str());
            }
            return static_cast<int>(ExitCode::Ok);
        }
        if (run->parsed()) {
            std::string id = opt.scenario;
            const auto o = detail::overrides_from(opt, id);
            if (id.empty()) throw ParameterError("run: a scenario id (or a --config with \"model\") is required");
            std::vector<ReportBundle> bundles;
            if (id == "all") {
                for (const auto& s : list_scenarios()) {
                    ScenarioOverrides so = o;
                    // Dimensions only make sense per scenario.
                    so.dims.reset();
                    so.guard.reset();
                    bundles.push_back(run_scenario(s.id, so));
                }
            } else {
                bundles.push_back(run_scenario(id, o));
            }
            detail::emit(opt, bundles, out);
            return static_cast<int>(detail::summarize(bundles, err));
        }
        if (verify->parsed()) {
            const auto bundle = detail::verify_files(opt);
            detail::emit(opt, {bundle}, out);
            return static_cast<int>(detail::summarize({bundle}, err));
        }
        if (exp->parsed()) {
            std::string id = opt.scenario;
            const auto o = detail::overrides_from(opt, id);
            std::filesystem::create_directories(opt.out_dir);
            for (const auto& op : detail::export_operators(id, o)) {
                const auto path = (std::filesystem::path(opt.out_dir) / (op.name() + ".json")).string();
                write_operator(op, path);
                out << path << '\n';
            }
            return static_cast<int>(ExitCode::Ok);
        }
    } catch (const FormatError& e) {
        err << "alo: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const std::invalid_argument& e) {  // DimensionError, ParameterError
        err << "alo: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "alo: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const std::exception& e) {
        err << "alo: verification aborted: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Failed);
    }
    return static_cast<int>(ExitCode::Usage);
}

} // namespace alo

#endif
