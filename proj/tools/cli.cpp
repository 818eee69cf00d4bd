#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "heun/errors.hpp"
#include "heun/expansions.hpp"
#include "heun/identities.hpp"
#include "heun/oracle.hpp"
#include "heun/series.hpp"

namespace heun::cli {

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    std::vector<double> points() const {
        if (count < 1) throw InvalidParameters("z grid is empty");
        std::vector<double> zs;
        if (count == 1) {
            zs.push_back(start);
            return zs;
        }
        for (int i = 0; i < count; ++i) {
            zs.push_back(start + (stop - start) * i / (count - 1));
        }
        return zs;
    }
};

struct ParamFile {
    HeunParams params{};
    std::optional<CaseTag> case_tag;
    std::optional<double> s_value;
    std::optional<ExpansionKind> expansion;
    std::optional<int> terms;
    std::optional<GridSpec> grid;
};

const std::map<std::string, CaseTag> kCaseNames = {
    {"q_zero", CaseTag::QZero},
    {"q_alphabeta", CaseTag::QAlphaBeta},
    {"q_a_alphabeta", CaseTag::QAAlphaBeta},
    {"alphabeta_zero", CaseTag::AlphaBetaZero},
};

const std::map<std::string, ExpansionKind> kKindNames = {
    {"appell", ExpansionKind::Appell},
    {"beta", ExpansionKind::Beta},
    {"two_f1", ExpansionKind::TwoF1},
    {"closed_form", ExpansionKind::ClosedForm},
};

std::string kind_name(ExpansionKind k) {
    for (const auto& [name, kind] : kKindNames) {
        if (kind == k) return name;
    }
    return "?";
}

double require_number(const json& j, const std::string& key) {
    if (!j.at(key).is_number()) {
        throw InvalidParameters("key '" + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

ParamFile load_param_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameters("cannot open parameter file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidParameters(std::string("parameter file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidParameters("parameter file must hold one object");

    static const std::vector<std::string> known = {
        "a", "q", "alpha", "beta", "gamma", "delta", "epsilon",
        "case", "s", "expansion", "terms", "z_grid"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const auto& k : known) ok = ok || k == key;
        if (!ok) throw InvalidParameters("unknown key in parameter file: " + key);
    }
    for (const char* key : {"a", "q", "alpha", "beta", "gamma", "delta"}) {
        if (!j.contains(key)) {
            throw InvalidParameters(std::string("missing key: ") + key);
        }
    }

    ParamFile pf;
    std::optional<double> epsilon;
    if (j.contains("epsilon")) epsilon = require_number(j, "epsilon");
    pf.params = validate_params(require_number(j, "a"), require_number(j, "q"),
                                require_number(j, "alpha"), require_number(j, "beta"),
                                require_number(j, "gamma"), require_number(j, "delta"),
                                epsilon);
    if (j.contains("case")) {
        const auto name = j.at("case").get<std::string>();
        const auto it = kCaseNames.find(name);
        if (it == kCaseNames.end()) throw InvalidParameters("unknown case: " + name);
        pf.case_tag = it->second;
    }
    if (j.contains("s")) pf.s_value = require_number(j, "s");
    if (j.contains("expansion")) {
        const auto name = j.at("expansion").get<std::string>();
        const auto it = kKindNames.find(name);
        if (it == kKindNames.end()) throw InvalidParameters("unknown expansion: " + name);
        pf.expansion = it->second;
    }
    if (j.contains("terms")) {
        if (!j.at("terms").is_number_integer()) {
            throw InvalidParameters("terms must be an integer");
        }
        pf.terms = j.at("terms").get<int>();
    }
    if (j.contains("z_grid")) {
        const json& g = j.at("z_grid");
        if (!g.is_object() || !g.contains("start") || !g.contains("stop") ||
            !g.contains("count")) {
            throw InvalidParameters("z_grid needs start, stop and count");
        }
        GridSpec grid;
        grid.start = require_number(g, "start");
        grid.stop = require_number(g, "stop");
        if (!g.at("count").is_number_integer()) {
            throw InvalidParameters("z_grid count must be an integer");
        }
        grid.count = g.at("count").get<int>();
        pf.grid = grid;
    }
    return pf;
}

struct CommonOptions {
    std::string params_path;
    std::string out_path;
    int terms = 200;
    bool terms_given = false;
    double tol = 1e-6;
    double seed_fraction = kDefaultSeedFraction;
    GridSpec grid;
    bool grid_given = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--params", o.params_path, "parameter file (JSON object)")
        ->required();
    cmd->add_option("--out", o.out_path, "output file (default: stdout)");
    cmd->add_option("--terms", o.terms, "series truncation order")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", o.tol, "pass tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--seed-offset", o.seed_fraction,
                    "oracle seed offset as a fraction of the radius");
    cmd->add_option("--z-start", o.grid.start, "first grid point");
    cmd->add_option("--z-stop", o.grid.stop, "last grid point");
    cmd->add_option("--z-count", o.grid.count, "number of grid points");
}

// Grid resolution: flags win over the file block.
std::vector<double> resolve_grid(const CLI::App* cmd, const CommonOptions& o,
                                 const ParamFile& pf) {
    if (cmd->count("--z-count") > 0 || cmd->count("--z-start") > 0 ||
        cmd->count("--z-stop") > 0) {
        return o.grid.points();
    }
    if (pf.grid) return pf.grid->points();
    throw InvalidParameters("no z grid given (use z_grid in the file or --z-*)");
}

int resolve_terms(const CLI::App* cmd, const CommonOptions& o,
                  const ParamFile& pf) {
    if (cmd->count("--terms") > 0) return o.terms;
    if (pf.terms) return *pf.terms;
    return o.terms;
}

void write_output(const CommonOptions& o, std::ostream& out,
                  const std::string& body) {
    if (o.out_path.empty()) {
        out << body;
        return;
    }
    std::ofstream f(o.out_path);
    if (!f) throw InvalidParameters("cannot open output file: " + o.out_path);
    f << body;
}

IntegrationSpec oracle_spec(const HeunParams& params, PointTag point,
                            Branch branch, double seed_fraction) {
    IntegrationSpec spec;
    spec.params = params;
    spec.seed_point = point;
    spec.branch = branch;
    spec.seed_offset = seed_fraction * convergence_radius(params, point);
    spec.tolerance = 1e-10;
    return spec;
}

// ---- eval ---------------------------------------------------------------

int cmd_eval(const CLI::App* cmd, const CommonOptions& o,
             const std::string& point_name, const std::string& branch_name,
             std::ostream& out) {
    const ParamFile pf = load_param_file(o.params_path);
    PointTag point = PointTag::Zero;
    if (point_name == "one" || point_name == "1") point = PointTag::One;
    else if (point_name == "a") point = PointTag::A;
    else if (point_name != "zero" && point_name != "0") {
        throw InvalidParameters("unknown point: " + point_name);
    }
    Branch branch = Branch::First;
    if (branch_name == "second") branch = Branch::Second;
    else if (branch_name != "first") {
        throw InvalidParameters("unknown branch: " + branch_name);
    }

    const int terms = resolve_terms(cmd, o, pf);
    const auto zs = resolve_grid(cmd, o, pf);
    const LocalSeries series = frobenius_series(pf.params, point, branch, terms);
    const IntegrationSpec spec =
        oracle_spec(pf.params, point, branch, o.seed_fraction);

    std::ostringstream csv;
    csv << "z,value_series,value_oracle,abs_err,rel_err\n";
    for (double z : zs) {
        const double v = eval_series(series, z);
        const double u = integrate_heun(spec, z).first;
        const double abs_err = std::abs(v - u);
        const double rel_err = abs_err / std::max(std::abs(u), 1e-300);
        csv << fmt(z) << ',' << fmt(v) << ',' << fmt(u) << ',' << fmt(abs_err)
            << ',' << fmt(rel_err) << '\n';
    }
    write_output(o, out, csv.str());
    return kExitPass;
}

// ---- identity -----------------------------------------------------------

int cmd_identity(const CLI::App* cmd, const CommonOptions& o,
                 const std::string& case_name, double s_flag, bool s_given,
                 std::ostream& out) {
    const ParamFile pf = load_param_file(o.params_path);

    std::optional<CaseTag> tag = pf.case_tag;
    if (!case_name.empty()) {
        const auto it = kCaseNames.find(case_name);
        if (it == kCaseNames.end()) {
            throw InvalidParameters("unknown case: " + case_name);
        }
        tag = it->second;
    }
    if (!tag) throw InvalidParameters("no case given (file key 'case' or --case)");

    double s = 1.0;
    if (s_given) s = s_flag;
    else if (pf.s_value) s = *pf.s_value;
    IdentityCase idcase{*tag, *tag == CaseTag::AlphaBetaZero ? 0.0 : s};

    const int order = resolve_terms(cmd, o, pf);
    const auto [point, branch] = lhs_branch_for(idcase);
    (void)branch;

    std::vector<double> samples;
    if (pf.grid || cmd->count("--z-count") > 0) {
        samples = resolve_grid(cmd, o, pf);
    } else {
        const double p0 = singular_point(pf.params, point).location;
        const double r = convergence_radius(pf.params, point);
        for (double f : {0.10, 0.18, 0.26, 0.34}) samples.push_back(p0 + f * r);
    }

    const IdentityComparison cmp =
        verify_identity_detail(pf.params, idcase, order, samples, o.tol);

    std::ostringstream csv;
    csv << "order,lhs_coeff,rhs_coeff_scaled,rel_deviation\n";
    for (size_t m = 0; m < cmp.deviations.size(); ++m) {
        csv << m << ',' << fmt(cmp.lhs_coeffs[m]) << ','
            << fmt(cmp.rhs_coeffs[m]) << ',' << fmt(cmp.deviations[m]) << '\n';
    }
    const VerificationReport& r = cmp.report;
    if (r.degenerate) {
        csv << "DEGENERATE constant=" << fmt(r.fitted_constant) << '\n';
        write_output(o, out, csv.str());
        return kExitPass;
    }
    csv << (r.pass ? "PASS" : "FAIL") << " constant=" << fmt(r.fitted_constant)
        << " max_coeff_dev=" << fmt(r.max_coeff_deviation)
        << " max_point_dev=" << fmt(r.max_point_deviation) << '\n';
    write_output(o, out, csv.str());
    return r.pass ? kExitPass : kExitFail;
}

// ---- expand / report ----------------------------------------------------

struct BuiltExpansion {
    ExpansionKind kind;
    ExpansionSeries series;
    double oracle_constant; // expansion value / normalized branch value
    Branch branch;
};

BuiltExpansion build_expansion(const HeunParams& params, ExpansionKind kind,
                               int terms) {
    switch (kind) {
        case ExpansionKind::Appell:
            return {kind, expand_appell(params, terms),
                    1.0 / (1.0 - params.gamma), Branch::Second};
        case ExpansionKind::Beta:
            return {kind, expand_beta(params, terms),
                    params.a / (1.0 - params.gamma), Branch::Second};
        case ExpansionKind::TwoF1:
            return {kind, expand_2f1(params, terms),
                    params.a / (1.0 - params.gamma), Branch::Second};
        default:
            return {kind, expand_closed_form(params, terms), 1.0, Branch::First};
    }
}

std::vector<ExpansionKind> resolve_kinds(const std::vector<std::string>& flags,
                                         const ParamFile& pf) {
    std::vector<ExpansionKind> kinds;
    for (const auto& name : flags) {
        const auto it = kKindNames.find(name);
        if (it == kKindNames.end()) {
            throw InvalidParameters("unknown expansion kind: " + name);
        }
        kinds.push_back(it->second);
    }
    if (kinds.empty() && pf.expansion) kinds.push_back(*pf.expansion);
    if (kinds.empty()) {
        throw InvalidParameters("no expansion kind given (file key 'expansion' or --kind)");
    }
    return kinds;
}

int cmd_expand(const CLI::App* cmd, const CommonOptions& o,
               const std::vector<std::string>& kind_flags, std::ostream& out) {
    const ParamFile pf = load_param_file(o.params_path);
    const auto kinds = resolve_kinds(kind_flags, pf);
    const int terms = resolve_terms(cmd, o, pf);
    const auto zs = resolve_grid(cmd, o, pf);

    std::vector<BuiltExpansion> built;
    for (ExpansionKind k : kinds) built.push_back(build_expansion(pf.params, k, terms));

    std::ostringstream csv;
    csv << "z";
    for (const auto& b : built) {
        const auto n = kind_name(b.kind);
        csv << ",value_" << n << ",oracle_" << n << ",abs_err_" << n
            << ",rel_err_" << n;
    }
    for (size_t i = 0; i < built.size(); ++i) {
        for (size_t j = i + 1; j < built.size(); ++j) {
            csv << ",equiv_" << kind_name(built[i].kind) << '_'
                << kind_name(built[j].kind);
        }
    }
    csv << '\n';

    bool all_pass = true;
    for (double z : zs) {
        csv << fmt(z);
        std::vector<double> normalized(built.size());
        for (size_t i = 0; i < built.size(); ++i) {
            const auto& b = built[i];
            const double v = b.series(z);
            const IntegrationSpec spec =
                oracle_spec(pf.params, PointTag::Zero, b.branch, o.seed_fraction);
            const double u = b.oracle_constant * integrate_heun(spec, z).first;
            const double abs_err = std::abs(v - u);
            const double rel_err = abs_err / std::max(std::abs(u), 1e-300);
            all_pass = all_pass && rel_err <= o.tol;
            normalized[i] = v / b.oracle_constant;
            csv << ',' << fmt(v) << ',' << fmt(u) << ',' << fmt(abs_err) << ','
                << fmt(rel_err);
        }
        for (size_t i = 0; i < built.size(); ++i) {
            for (size_t j = i + 1; j < built.size(); ++j) {
                const double den = std::max(
                    {std::abs(normalized[i]), std::abs(normalized[j]), 1e-300});
                csv << ',' << fmt(std::abs(normalized[i] - normalized[j]) / den);
            }
        }
        csv << '\n';
    }
    write_output(o, out, csv.str());
    return all_pass ? kExitPass : kExitFail;
}

int cmd_report(const CLI::App* cmd, const CommonOptions& o,
               const std::vector<std::string>& kind_flags,
               const std::string& n_list, std::ostream& out) {
    const ParamFile pf = load_param_file(o.params_path);
    const auto kinds = resolve_kinds(kind_flags, pf);
    const auto zs = resolve_grid(cmd, o, pf);

    std::vector<int> ns;
    std::stringstream ss(n_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            ns.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw InvalidParameters("bad term count in --n-values: " + item);
        }
        if (ns.back() < 1) throw InvalidParameters("term counts must be positive");
    }
    if (ns.empty()) throw InvalidParameters("--n-values is empty");

    std::ostringstream csv;
    csv << "kind,terms,max_rel_err\n";
    for (ExpansionKind kind : kinds) {
        // One oracle pass per kind; the truncation sweep reuses it.
        std::vector<double> reference(zs.size());
        {
            const BuiltExpansion probe = build_expansion(pf.params, kind, 1);
            const IntegrationSpec spec = oracle_spec(pf.params, PointTag::Zero,
                                                     probe.branch, o.seed_fraction);
            for (size_t i = 0; i < zs.size(); ++i) {
                reference[i] =
                    probe.oracle_constant * integrate_heun(spec, zs[i]).first;
            }
        }
        for (int n : ns) {
            const BuiltExpansion b = build_expansion(pf.params, kind, n);
            double worst = 0.0;
            for (size_t i = 0; i < zs.size(); ++i) {
                const double v = b.series(zs[i]);
                const double rel = std::abs(v - reference[i]) /
                                   std::max(std::abs(reference[i]), 1e-300);
                worst = std::max(worst, rel);
            }
            csv << kind_name(kind) << ',' << n << ',' << fmt(worst) << '\n';
        }
    }
    write_output(o, out, csv.str());
    return kExitPass;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Series solutions and derivative identities of the general "
                 "Heun equation, checked against direct integration"};
    app.require_subcommand(1);

    CommonOptions eval_o, id_o, exp_o, rep_o;
    std::string point_name = "zero", branch_name = "first";
    std::string case_name;
    double s_flag = 1.0;
    std::vector<std::string> exp_kinds, rep_kinds;
    std::string n_list = "10,20,40,80";

    CLI::App* eval = app.add_subcommand("eval", "local series vs integration");
    add_common(eval, eval_o);
    eval->add_option("--point", point_name, "expansion point: zero|one|a");
    eval->add_option("--branch", branch_name, "local branch: first|second");

    CLI::App* identity =
        app.add_subcommand("identity", "derivative-identity verification");
    add_common(identity, id_o);
    identity->add_option("--case", case_name,
                         "q_zero|q_alphabeta|q_a_alphabeta|alphabeta_zero");
    CLI::Option* s_opt = identity->add_option("--s", s_flag, "prefactor exponent");

    CLI::App* expand =
        app.add_subcommand("expand", "hypergeometric-family expansions vs oracle");
    add_common(expand, exp_o);
    expand->add_option("--kind", exp_kinds,
                       "appell|beta|two_f1|closed_form (repeatable)");

    CLI::App* report =
        app.add_subcommand("report", "truncation sweep: max error per term count");
    add_common(report, rep_o);
    report->add_option("--kind", rep_kinds,
                       "appell|beta|two_f1|closed_form (repeatable)");
    report->add_option("--n-values", n_list, "comma-separated term counts");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitPass;
        }
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (eval->parsed()) {
            return cmd_eval(eval, eval_o, point_name, branch_name, out);
        }
        if (identity->parsed()) {
            return cmd_identity(identity, id_o, case_name, s_flag,
                                s_opt->count() > 0, out);
        }
        if (expand->parsed()) {
            return cmd_expand(expand, exp_o, exp_kinds, out);
        }
        return cmd_report(report, rep_o, rep_kinds, n_list, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

} // namespace heun::cli
