#include "qfields/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qfields/arith.hpp"
#include "qfields/classno.hpp"
#include "qfields/errors.hpp"
#include "qfields/families.hpp"
#include "qfields/lehmer.hpp"
#include "qfields/lrn.hpp"
#include "qfields/serialize.hpp"

namespace qf::cli {

namespace {

enum class Format { Text, Json, Csv };

struct Globals {
    Format format = Format::Text;
    unsigned threads = 1;
    std::uint64_t rho_budget = arith::FactorBudget{}.rho_iterations;
    std::uint64_t lrn_budget = lrn::LrnBudget{}.max_candidates;
    std::string max_squarefree = "1000000000000";
    std::string decomposition_limit = "1000000000000";
    unsigned t5_max_k = lehmer::FamilySearchBounds{}.max_k;
    std::string t5_max_u = "10000";
    bool quiet = false;
};

// Raw argument strings; integers are parsed after CLI11 so that values of any
// size survive and parse errors carry our own message.
struct Args {
    std::string d, disc, method, a, b, ell, p, k, m_text;
    long n = 0, m = 0;
    unsigned z_max = 1;
    bool forms = false, verify = false;
    std::string mode = "strict";
    std::string input;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

BigInt parse_arg(const std::string& name, const std::string& text) {
    try {
        return parse_bigint(text);
    } catch (const std::exception&) {
        throw UsageError("option " + name + ": '" + text + "' is not an integer");
    }
}

unsigned parse_odd_n(long n) {
    if (n < 3 || n % 2 == 0) throw UsageError("-n must be an odd integer >= 3");
    if (n > 1'000'000) throw UsageError("-n is too large");
    return static_cast<unsigned>(n);
}

// Throttled progress on the error stream: at most ~20 lines per computation.
std::function<void(std::uint64_t, std::uint64_t)> progress_printer(std::ostream& err, bool quiet,
                                                                   std::string label) {
    if (quiet) return {};
    auto last = std::make_shared<std::uint64_t>(0);
    return [&err, last, label = std::move(label)](std::uint64_t done, std::uint64_t total) {
        if (total < 200'000) return;
        const std::uint64_t step = total / 20;
        if (done < total && done < *last + step) return;
        *last = done;
        err << label << ": " << done << '/' << total << '\n' << std::flush;
    };
}

arith::FactorBudget factor_budget(const Globals& g) { return {g.rho_budget}; }

classno::FormCountOptions form_options(const Globals& g, std::ostream& err) {
    classno::FormCountOptions o;
    o.threads = g.threads;
    o.progress = progress_printer(err, g.quiet, "forms");
    return o;
}

families::VerifyOptions verify_options(const Globals& g, std::ostream& err) {
    families::VerifyOptions o;
    o.factor_budget = factor_budget(g);
    o.max_abs_squarefree = parse_arg("--max-squarefree", g.max_squarefree);
    o.threads = g.threads;
    o.progress = progress_printer(err, g.quiet, "forms");
    return o;
}

int tuple_exit(const families::FamilyTuple& t) {
    switch (t.verdict) {
        case families::Verdict::Verified:
        case families::Verdict::Unverified: return kOk;
        case families::Verdict::Incomplete: return kIncomplete;
        case families::Verdict::Failed: return kAnomaly;
    }
    return kAnomaly;
}

std::string opt_str(const std::optional<BigInt>& v) { return v ? to_string(*v) : std::string("-"); }

void print_tuple(const families::FamilyTuple& t, Format f, bool& csv_header_done, std::ostream& out) {
    if (f == Format::Json) {
        out << serialize::tuple_to_json(t) << '\n';
        return;
    }
    if (f == Format::Csv) {
        if (!csv_header_done) out << serialize::tuple_csv_header() << '\n';
        csv_header_done = true;
        for (const auto& row : serialize::tuple_to_csv(t)) out << row << '\n';
        return;
    }
    out << t.kind << " n=" << t.n;
    if (t.k) out << " k=" << to_string(*t.k);
    if (t.m) out << " m=" << *t.m;
    if (!t.p_list.empty()) {
        out << " p=";
        for (std::size_t i = 0; i < t.p_list.size(); ++i) out << (i ? "," : "") << t.p_list[i];
    }
    out << '\n';
    if (t.d) out << "  d = " << to_string(*t.d) << "\n  ell = " << opt_str(t.ell) << '\n';
    for (const auto& w : t.warnings) out << "  warning: " << w << '\n';
    for (const auto& m : t.members) {
        out << "  " << to_string(m.radicand) << "  sqfree=" << opt_str(m.squarefree_part)
            << " h=" << opt_str(m.class_number);
        if (m.divisible) out << (*m.divisible ? " divisible" : " NOT divisible");
        out << " [" << families::to_string(m.status) << ']';
        if (!m.note.empty()) out << ' ' << m.note;
        out << '\n';
    }
    out << "  verdict: " << families::to_string(t.verdict) << '\n';
}

int emit_tuple(families::FamilyTuple t, bool verify, const Globals& g, std::ostream& out, std::ostream& err) {
    if (verify) t = families::verify_tuple(std::move(t), verify_options(g, err));
    bool header = false;
    print_tuple(t, g.format, header, out);
    return tuple_exit(t);
}

int cmd_classnum(const Args& a, const Globals& g, std::ostream& out, std::ostream& err) {
    if (a.d.empty() == a.disc.empty()) throw UsageError("classnum needs exactly one of -d or --disc");
    if (!a.method.empty() && a.method != "form-count" && a.method != "dirichlet") throw UsageError("--method must be form-count or dirichlet");
    const bool dirichlet = a.method == "dirichlet";
    auto opts = form_options(g, err);
    opts.collect_forms = a.forms;
    if (dirichlet && a.forms) throw UsageError("--forms needs --method form-count");

    std::optional<BigInt> radicand;
    classno::ClassNumberResult r;
    if (!a.d.empty()) {
        BigInt d = parse_arg("-d", a.d);
        if (d >= 0) throw UsageError("-d must be negative (imaginary quadratic fields only)");
        radicand = d;
        const BigInt s = arith::squarefree_decompose(d, factor_budget(g)).s;
        if (s != d) err << "note: using square-free part " << to_string(s) << " of " << to_string(d) << '\n';
        r = dirichlet ? classno::class_number_dirichlet(classno::fundamental_discriminant(s))
                      : classno::field_class_number(s, opts);
    } else {
        const BigInt D = parse_arg("--disc", a.disc);
        r = dirichlet ? classno::class_number_dirichlet(D) : classno::class_number_forms(D, opts);
    }

    switch (g.format) {
        case Format::Json:
            out << serialize::class_number_to_json(r, radicand ? &*radicand : nullptr) << '\n';
            break;
        case Format::Csv:
            out << "discriminant,h,method\n"
                << to_string(r.discriminant) << ',' << to_string(r.h) << ',' << serialize::method_name(r.method)
                << '\n';
            break;
        case Format::Text:
            out << "h = " << to_string(r.h) << '\n';
            if (r.reduced_forms) {
                for (const auto& f : *r.reduced_forms) {
                    out << "  (" << to_string(f.a) << ", " << to_string(f.b) << ", " << to_string(f.c) << ")\n";
                }
            }
            break;
    }
    return kOk;
}


int cmd_squarefree(const Args& a, const Globals& g, std::ostream& out) {
    const BigInt m = parse_arg("-m", a.m_text);
    if (m == 0) throw UsageError("-m must be nonzero");
    const auto sf = arith::squarefree_decompose(m, factor_budget(g));
    switch (g.format) {
        case Format::Json: out << serialize::squarefree_to_json(sf) << '\n'; break;
        case Format::Csv: out << "input,s,f\n" << to_string(sf.input) << ',' << to_string(sf.s) << ',' << to_string(sf.f) << '\n'; break;
        case Format::Text: out << to_string(sf.input) << " = " << to_string(sf.s) << " * " << to_string(sf.f) << "^2\n"; break;
    }
    return kOk;
}

lehmer::LehmerParams lehmer_params(const Args& a) {
    const BigInt pa = parse_arg("-a", a.a), pb = parse_arg("-b", a.b);
    if (!lehmer::LehmerParams::is_valid(pa, pb)) {
        throw UsageError("(" + a.a + ", " + a.b + ") is not a Lehmer pair");
    }
    return lehmer::LehmerParams::make(pa, pb);
}

int cmd_lehmer(const Args& a, const Globals& g, std::ostream& out) {
    const auto params = lehmer_params(a);
    if (a.n < 0) throw UsageError("-n must be >= 0");
    const auto n = static_cast<unsigned long>(a.n);
    const BigInt v = lehmer::lehmer_number(params, n);
    switch (g.format) {
        case Format::Json: out << serialize::lehmer_to_json(params, n, v) << '\n'; break;
        case Format::Csv: out << "a,b,n,value\n" << a.a << ',' << a.b << ',' << n << ',' << to_string(v) << '\n'; break;
        case Format::Text: out << "L_" << n << " = " << to_string(v) << '\n'; break;
    }
    return kOk;
}

int cmd_pdiv(const Args& a, const Globals& g, std::ostream& out, std::ostream& err) {
    const auto params = lehmer_params(a);
    if (a.n < 2) throw UsageError("-n must be >= 2");
    const auto n = static_cast<unsigned long>(a.n);
    const auto primes = lehmer::primitive_divisors(params, n, factor_budget(g));
    std::string joined;
    for (std::size_t i = 0; i < primes.size(); ++i) joined += (i ? " " : "") + to_string(primes[i]);
    switch (g.format) {
        case Format::Json: out << serialize::primitive_divisors_to_json(params, n, primes) << '\n'; break;
        case Format::Csv: out << "a,b,n,primitive_divisors\n" << a.a << ',' << a.b << ',' << n << ',' << joined << '\n'; break;
        case Format::Text:
            out << "primitive divisors of L_" << n << ": " << (primes.empty() ? "none" : joined) << '\n';
            break;
    }
    // A pair missing from the exceptional table should always have one.
    if (primes.empty() && n % 2 == 1 && n >= 3) {
        lehmer::FamilySearchBounds bounds{g.t5_max_k, parse_arg("--t5-max-u", g.t5_max_u)};
        if (!lehmer::exceptional_table_lookup(n, params, bounds)) {
            err << "anomaly: no primitive divisor, and the pair is not in the exceptional table\n";
            return kAnomaly;
        }
    }
    return kOk;
}

int cmd_lrn(const Args& a, const Globals& g, std::ostream& out) {
    lrn::LrnInstance inst{parse_arg("-d", a.d), parse_arg("--ell", a.ell), a.z_max};
    const std::string method = a.method.empty() ? "structured" : a.method;
    if (method != "structured" && method != "brute") throw UsageError("--method must be structured or brute");
    const lrn::LrnBudget budget{g.lrn_budget};
    const auto sols = method == "brute" ? lrn::solve_brute(inst, budget) : lrn::solve_structured(inst, budget);
    if (g.format == Format::Json) {
        out << serialize::solutions_to_json(inst, method, sols) << '\n';
        return kOk;
    }
    if (g.format == Format::Csv) out << "x,y,z,eps,mu,a,b,s,t\n";
    for (const auto& s : sols) {
        const char sep = g.format == Format::Csv ? ',' : ' ';
        out << to_string(s.x) << sep << to_string(s.y) << sep << s.z;
        if (s.decomposition) {
            const auto& dc = *s.decomposition;
            if (g.format == Format::Text) out << "  =";
            out << sep << dc.eps << sep << dc.mu << sep << to_string(dc.a) << sep << to_string(dc.b) << sep << dc.s
                << sep << dc.t;
        } else if (g.format == Format::Csv) {
            out << ",,,,,,";
        }
        out << '\n';
    }
    return kOk;
}

int cmd_thm31(const Args& a, const Globals& g, std::ostream& out, std::ostream& err) {
    if (a.n <= 0) throw UsageError("-n is required");
    lrn::Theorem31Options opts;
    opts.factor_budget = factor_budget(g);
    opts.forms = form_options(g, err);
    opts.decomposition_limit = parse_arg("--decomposition-limit", g.decomposition_limit);
    const auto r = lrn::theorem31_verify(parse_arg("--ell", a.ell), BigInt(a.n), parse_arg("-p", a.p), opts);
    if (g.format == Format::Json) {
        out << serialize::theorem31_to_json(r) << '\n';
    } else if (g.format == Format::Csv) {
        out << "ell,n,p,d,r,class_number,verdict,failed_check\n"
            << to_string(r.ell) << ',' << to_string(r.n) << ',' << to_string(r.p) << ','
            << (r.d == 0 ? "" : to_string(r.d)) << ',' << (r.r == 0 ? "" : to_string(r.r)) << ','
            << (r.class_number ? to_string(*r.class_number) : "") << ','
            << (r.accepted() ? (r.verdict ? "true" : "false") : "") << ',' << r.failed_check.value_or("") << '\n';
    } else {
        for (const auto& c : r.hypotheses) {
            out << (c.passed ? "  ok    " : "  FAIL  ") << c.name;
            if (!c.detail.empty()) out << "  (" << c.detail << ')';
            out << '\n';
        }
        if (r.accepted()) {
            out << "d = " << to_string(r.d) << ", r = " << to_string(r.r) << '\n';
            if (r.decomposition) {
                const auto& dc = *r.decomposition;
                out << "decomposition: eps=" << dc.eps << " mu=" << dc.mu << " a=" << to_string(dc.a)
                    << " b=" << to_string(dc.b) << " s=" << dc.s << " t=" << dc.t << '\n';
            }
            if (r.trace) {
                out << "t=3 excluded: +1 " << (r.trace->t3_plus_solvable ? "NO" : "yes") << ", -1 "
                    << (r.trace->t3_minus_solvable ? "NO" : "yes") << '\n'
                    << "t=5 matches up to k=" << r.trace->t5_k_bound << ": " << r.trace->t5_matches << '\n';
            }
            out << "h*(-4d) = " << opt_str(r.class_number) << '\n'
                << "verdict: " << (r.verdict ? "n divides h" : "n does NOT divide h") << '\n';
        }
    }
    if (!r.accepted()) {
        err << "rejected: " << *r.failed_check << " does not hold\n";
        return kRejected;
    }
    return r.verdict ? kOk : kAnomaly;
}

families::ConstructOptions construct_options(const Args& a, const Globals& g) {
    families::ConstructOptions o;
    if (a.mode == "strict") {
        o.mode = families::Mode::Strict;
    } else if (a.mode == "lenient") {
        o.mode = families::Mode::Lenient;
    } else {
        throw UsageError("--mode must be strict or lenient");
    }
    o.factor_budget = factor_budget(g);
    return o;
}

int cmd_verify(const Args& a, const Globals& g, std::istream& in, std::ostream& out, std::ostream& err) {
    std::ifstream file;
    std::istream* src = &in;
    if (!a.input.empty() && a.input != "-") {
        file.open(a.input);
        if (!file) throw UsageError("cannot open " + a.input);
        src = &file;
    }
    const auto opts = verify_options(g, err);
    int status = kOk;
    bool header = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(*src, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        families::FamilyTuple t;
        try {
            t = serialize::tuple_from_json(line);
        } catch (const DomainError& e) {
            throw UsageError("line " + std::to_string(lineno) + ": " + e.what());
        }
        t = families::verify_tuple(std::move(t), opts);
        print_tuple(t, g.format, header, out);
        status = std::max(status, tuple_exit(t));
    }
    return status;
}

int cmd_tables(const Globals& g, std::ostream& out) {
    if (g.format == Format::Json) {
        out << nlohmann::ordered_json::parse(lehmer::table_json()).dump() << '\n';
        return kOk;
    }
    if (g.format == Format::Csv) out << "t,a,b\n";
    else out << "exceptional Lehmer pairs, table version " << lehmer::table_version() << '\n';
    for (const auto& e : lehmer::sporadic_table()) {
        if (g.format == Format::Csv) out << e.t << ',' << to_string(e.a) << ',' << to_string(e.b) << '\n';
        else out << "  t=" << e.t << "  (" << to_string(e.a) << ", " << to_string(e.b) << ")\n";
    }
    if (g.format == Format::Text) {
        out << "  t=3 and t=5: parametrized families (see --format json)\n";
    }
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Class number divisibility for families of imaginary quadratic fields", "qfields"};
    app.require_subcommand(1);
    Globals g;
    Args a;

    std::map<std::string, Format> formats{{"text", Format::Text}, {"json", Format::Json}, {"csv", Format::Csv}};
    auto add_globals = [&](CLI::App* s) {
        s->add_option("--format", g.format, "text, json or csv")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
        s->add_option("--threads", g.threads, "worker threads for class-number enumeration")->check(CLI::Range(1u, 256u));
        s->add_option("--rho-budget", g.rho_budget, "Pollard rho iterations per factorization");
        s->add_option("--lrn-budget", g.lrn_budget, "candidate limit for LRN scans");
        s->add_option("--max-squarefree", g.max_squarefree, "largest |square-free part| sent to the class-number enumeration");
        s->add_option("--decomposition-limit", g.decomposition_limit, "skip the (p, r, n) decomposition above this ell^n");
        s->add_option("--t5-max-k", g.t5_max_k, "index bound for the t = 5 family search");
        s->add_option("--t5-max-u", g.t5_max_u, "parameter bound for the t = 3 family search");
        s->add_flag("-q,--quiet", g.quiet, "no progress on stderr");
    };

    auto* classnum = app.add_subcommand("classnum", "class number of Q(sqrt(d)) or h*(D)");
    classnum->add_option("-d", a.d, "negative radicand d");
    classnum->add_option("--disc", a.disc, "discriminant D < 0, D = 0, 1 mod 4");
    classnum->add_option("--method", a.method, "form-count (default) or dirichlet");
    classnum->add_flag("--forms", a.forms, "list the reduced forms");

    auto* squarefree = app.add_subcommand("squarefree", "m = s f^2");
    squarefree->add_option("-m", a.m_text, "nonzero integer")->required();

    auto* lehmer_cmd = app.add_subcommand("lehmer", "Lehmer number L_n(a, b)");
    auto* pdiv = app.add_subcommand("pdiv", "primitive divisors of L_n(a, b)");
    for (auto* s : {lehmer_cmd, pdiv}) {
        s->add_option("-a", a.a, "parameter a")->required();
        s->add_option("-b", a.b, "parameter b")->required();
        s->add_option("-n", a.n, "index")->required();
    }

    auto* lrn_cmd = app.add_subcommand("lrn-solve", "x^2 + d y^2 = ell^z");
    lrn_cmd->add_option("-d", a.d, "d >= 2, d != 3")->required();
    lrn_cmd->add_option("--ell", a.ell, "ell, coprime to 2d")->required();
    lrn_cmd->add_option("--z-max", a.z_max, "largest exponent z")->required();
    lrn_cmd->add_option("--method", a.method, "structured (default) or brute");

    auto* thm31 = app.add_subcommand("thm31", "check n | h*(-4d) for ell^n - p^2 = d r^2");
    thm31->add_option("--ell", a.ell, "odd ell = 3 mod 4")->required();
    thm31->add_option("-n", a.n, "odd exponent")->required();
    thm31->add_option("-p", a.p, "odd prime")->required();

    auto* quad = app.add_subcommand("quadruple", "fields d, d+1, d+4, d+4p^2");
    quad->add_option("-n", a.n, "odd n >= 3")->required();
    quad->add_option("-p", a.p, "odd prime")->required();
    quad->add_option("-k", a.k, "k >= 2")->required();
    quad->add_flag("--verify", a.verify, "compute class numbers");

    auto* quint = app.add_subcommand("quintuple", "fields d, d+1, d+4, d+36, d+100");
    quint->add_option("-n", a.n, "odd n >= 3")->required();
    quint->add_option("-k", a.k, "k >= 2")->required();
    quint->add_flag("--verify", a.verify, "compute class numbers");

    auto* tuples = app.add_subcommand("tuples", "d, d+1, d+4 and d+4p^2 for odd primes p <= m");
    tuples->add_option("-n", a.n, "odd n >= 3")->required();
    tuples->add_option("-m", a.m, "prime bound")->required();
    tuples->add_option("-k", a.k, "k >= 2")->required();
    tuples->add_option("--mode", a.mode, "strict (default) or lenient");
    tuples->add_flag("--verify", a.verify, "compute class numbers");

    auto* verify = app.add_subcommand("verify", "verify tuple records (JSON lines)");
    verify->add_option("--input", a.input, "file, or - for stdin");

    auto* tables = app.add_subcommand("tables", "dump the exceptional Lehmer table");

    for (auto* s : app.get_subcommands({})) add_globals(s);

    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (classnum->parsed()) return cmd_classnum(a, g, out, err);
        if (squarefree->parsed()) return cmd_squarefree(a, g, out);
        if (lehmer_cmd->parsed()) return cmd_lehmer(a, g, out);
        if (pdiv->parsed()) return cmd_pdiv(a, g, out, err);
        if (lrn_cmd->parsed()) return cmd_lrn(a, g, out);
        if (thm31->parsed()) return cmd_thm31(a, g, out, err);
        if (quad->parsed()) {
            const long p = to_i64(parse_arg("-p", a.p));
            return emit_tuple(families::quadruple(parse_odd_n(a.n), p, parse_arg("-k", a.k), construct_options(a, g)),
                              a.verify, g, out, err);
        }
        if (quint->parsed()) {
            return emit_tuple(families::quintuple(parse_odd_n(a.n), parse_arg("-k", a.k), construct_options(a, g)),
                              a.verify, g, out, err);
        }
        if (tuples->parsed()) {
            return emit_tuple(families::pi_tuple(parse_odd_n(a.n), a.m, parse_arg("-k", a.k), construct_options(a, g)),
                              a.verify, g, out, err);
        }
        if (verify->parsed()) return cmd_verify(a, g, std::cin, out, err);
        if (tables->parsed()) return cmd_tables(g, out);
    } catch (const Rejection& e) {
        err << "rejected: " << e.check() << " does not hold (" << e.what() << ")\n";
        return kRejected;
    } catch (const ResourceError& e) {
        err << "incomplete: " << e.what() << '\n';
        return kIncomplete;
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const std::range_error& e) {
        err << "invalid input: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace qf::cli
