#include "qfields/serialize.hpp"

#include <sstream>

#include "json.hpp"
#include "qfields/errors.hpp"

namespace qf::serialize {

using json = nlohmann::ordered_json;
using families::FamilyTuple;
using families::Member;

namespace {

json big(const BigInt& v) { return qf::to_string(v); }

template <class T>
json big_or_null(const std::optional<T>& v) {
    if (!v) return nullptr;
    return big(*v);
}

BigInt read_big(const json& j) {
    if (j.is_string()) return parse_bigint(j.get<std::string>());
    if (j.is_number_integer()) return BigInt(std::to_string(j.get<long long>()));
    throw DomainError("expected an integer or decimal string, got " + j.dump());
}

std::optional<BigInt> read_optional_big(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return read_big(*it);
}

json checks_json(const std::vector<lrn::HypothesisCheck>& checks) {
    json arr = json::array();
    for (const auto& c : checks) arr.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return arr;
}

json form_json(const classno::QuadForm& f) { return json::array({big(f.a), big(f.b), big(f.c)}); }

json decomposition_json(const lrn::Decomposition& d) {
    return {{"eps", d.eps}, {"mu", d.mu}, {"a", big(d.a)}, {"b", big(d.b)}, {"s", d.s}, {"t", d.t}};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string method_name(classno::Method m) { return m == classno::Method::FormCount ? "form-count" : "dirichlet"; }

std::string tuple_to_json(const FamilyTuple& t) {
    json j;
    j["schema"] = kTupleSchema;
    j["kind"] = t.kind;
    j["n"] = t.n;
    j["k"] = big_or_null(t.k);
    if (t.m) j["m"] = *t.m;
    j["p"] = t.p_list;
    j["d"] = big_or_null(t.d);
    j["ell"] = big_or_null(t.ell);
    j["hypotheses"] = checks_json(t.hypotheses);
    j["warnings"] = t.warnings;
    json members = json::array();
    for (const Member& m : t.members) {
        json mj;
        mj["offset"] = big(m.offset);
        mj["radicand"] = big(m.radicand);
        mj["squarefree_part"] = big_or_null(m.squarefree_part);
        mj["cofactor"] = big_or_null(m.cofactor);
        mj["class_number"] = big_or_null(m.class_number);
        mj["divisible"] = m.divisible ? json(*m.divisible) : json(nullptr);
        mj["status"] = families::to_string(m.status);
        mj["note"] = m.note;
        members.push_back(std::move(mj));
    }
    j["members"] = std::move(members);
    j["verdict"] = families::to_string(t.verdict);
    return j.dump();
}

FamilyTuple tuple_from_json(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("malformed tuple record: ") + e.what());
    }
    if (!j.is_object()) throw DomainError("tuple record must be a JSON object");
    if (auto it = j.find("schema"); it != j.end() && *it != kTupleSchema) {
        throw DomainError("unsupported schema " + it->dump());
    }
    try {
        FamilyTuple t;
        t.kind = j.value("kind", std::string("custom"));
        const long n = j.at("n").get<long>();
        if (n < 3 || n % 2 == 0) throw DomainError("n must be odd and >= 3");
        t.n = static_cast<unsigned>(n);
        t.k = read_optional_big(j, "k");
        if (auto it = j.find("m"); it != j.end() && !it->is_null()) t.m = it->get<long>();
        if (auto it = j.find("p"); it != j.end()) t.p_list = it->get<std::vector<long>>();
        t.d = read_optional_big(j, "d");
        t.ell = read_optional_big(j, "ell");
        if (auto it = j.find("hypotheses"); it != j.end()) {
            for (const auto& c : *it) {
                t.hypotheses.push_back({c.at("check").get<std::string>(), c.at("passed").get<bool>(),
                                        c.value("detail", std::string())});
            }
        }
        if (auto it = j.find("warnings"); it != j.end()) t.warnings = it->get<std::vector<std::string>>();
        for (const auto& mj : j.at("members")) {
            Member m;
            m.radicand = read_big(mj.at("radicand"));
            m.offset = read_optional_big(mj, "offset").value_or(t.d ? BigInt(m.radicand - *t.d) : BigInt(0));
            m.squarefree_part = read_optional_big(mj, "squarefree_part");
            m.cofactor = read_optional_big(mj, "cofactor");
            m.class_number = read_optional_big(mj, "class_number");
            if (auto it = mj.find("divisible"); it != mj.end() && !it->is_null()) m.divisible = it->get<bool>();
            m.status = families::member_status_from_string(mj.value("status", std::string("pending")));
            m.note = mj.value("note", std::string());
            t.members.push_back(std::move(m));
        }
        t.verdict = families::verdict_from_string(j.value("verdict", std::string("unverified")));
        return t;
    } catch (const json::exception& e) {
        throw DomainError(std::string("invalid tuple record: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DomainError(std::string("invalid tuple record: ") + e.what());
    }
}

std::string tuple_csv_header() {
    return "kind,n,k,p,d,offset,radicand,squarefree_part,cofactor,class_number,divisible,status,verdict";
}

std::vector<std::string> tuple_to_csv(const FamilyTuple& t) {
    std::string primes;
    for (std::size_t i = 0; i < t.p_list.size(); ++i) primes += (i ? ";" : "") + std::to_string(t.p_list[i]);
    auto opt = [](const std::optional<BigInt>& v) { return v ? qf::to_string(*v) : std::string(); };
    std::vector<std::string> rows;
    for (const Member& m : t.members) {
        std::ostringstream row;
        row << csv_field(t.kind) << ',' << t.n << ',' << opt(t.k) << ',' << primes << ',' << opt(t.d) << ','
            << qf::to_string(m.offset) << ',' << qf::to_string(m.radicand) << ',' << opt(m.squarefree_part) << ','
            << opt(m.cofactor) << ',' << opt(m.class_number) << ','
            << (m.divisible ? (*m.divisible ? "true" : "false") : "") << ',' << families::to_string(m.status) << ','
            << families::to_string(t.verdict);
        rows.push_back(row.str());
    }
    return rows;
}

std::string class_number_to_json(const classno::ClassNumberResult& r, const BigInt* radicand) {
    json j;
    j["schema"] = kClassNumberSchema;
    if (radicand) j["radicand"] = big(*radicand);
    j["discriminant"] = big(r.discriminant);
    j["h"] = big(r.h);
    j["method"] = method_name(r.method);
    if (r.reduced_forms) {
        json forms = json::array();
        for (const auto& f : *r.reduced_forms) forms.push_back(form_json(f));
        j["reduced_forms"] = std::move(forms);
    }
    return j.dump();
}

std::string theorem31_to_json(const lrn::Theorem31Report& r) {
    json j;
    j["schema"] = kTheorem31Schema;
    j["ell"] = big(r.ell);
    j["n"] = big(r.n);
    j["p"] = big(r.p);
    j["branch"] = r.branch;
    j["hypotheses"] = checks_json(r.hypotheses);
    j["failed_check"] = r.failed_check ? json(*r.failed_check) : json(nullptr);
    j["d"] = r.d == 0 ? json(nullptr) : big(r.d);
    j["r"] = r.r == 0 ? json(nullptr) : big(r.r);
    if (r.trace) {
        const auto& t = *r.trace;
        j["trace"] = {{"t3", {{"plus_solvable", t.t3_plus_solvable},
                              {"minus_solvable", t.t3_minus_solvable},
                              {"plus_excluded_mod4", t.t3_plus_excluded_mod4},
                              {"minus_excluded_mod3", t.t3_minus_excluded_mod3}}},
                      {"t5", {{"k_bound", t.t5_k_bound}, {"matches", t.t5_matches}}}};
    } else {
        j["trace"] = nullptr;
    }
    j["decomposition"] = r.decomposition ? decomposition_json(*r.decomposition) : json(nullptr);
    j["class_number"] = big_or_null(r.class_number);
    j["field_class_number"] = big_or_null(r.field_class_number);
    j["verdict"] = r.accepted() ? json(r.verdict) : json(nullptr);
    return j.dump();
}

std::string solutions_to_json(const lrn::LrnInstance& inst, std::string_view method,
                              const std::vector<lrn::LrnSolution>& sols) {
    json j;
    j["schema"] = kLrnSchema;
    j["d"] = big(inst.d);
    j["ell"] = big(inst.ell);
    j["z_max"] = inst.z_max;
    j["method"] = method;
    json arr = json::array();
    for (const auto& s : sols) {
        json sj{{"x", big(s.x)}, {"y", big(s.y)}, {"z", s.z}};
        sj["decomposition"] = s.decomposition ? decomposition_json(*s.decomposition) : json(nullptr);
        arr.push_back(std::move(sj));
    }
    j["solutions"] = std::move(arr);
    return j.dump();
}

std::string squarefree_to_json(const arith::SquarefreeDecomposition& sf) {
    json j;
    j["schema"] = kSquarefreeSchema;
    j["input"] = big(sf.input);
    j["s"] = big(sf.s);
    j["f"] = big(sf.f);
    return j.dump();
}

std::string lehmer_to_json(const lehmer::LehmerParams& p, unsigned long n, const BigInt& value) {
    json j;
    j["schema"] = kLehmerSchema;
    j["a"] = big(p.a());
    j["b"] = big(p.b());
    j["q"] = big(p.q());
    j["n"] = n;
    j["value"] = big(value);
    return j.dump();
}

std::string primitive_divisors_to_json(const lehmer::LehmerParams& p, unsigned long n,
                                       const std::vector<BigInt>& primes) {
    json j;
    j["schema"] = kPrimitiveDivisorSchema;
    j["a"] = big(p.a());
    j["b"] = big(p.b());
    j["n"] = n;
    json arr = json::array();
    for (const auto& q : primes) arr.push_back(big(q));
    j["primitive_divisors"] = std::move(arr);
    j["has_primitive_divisor"] = !primes.empty();
    j["exceptional"] = (n % 2 == 1 && n >= 3) ? json(lehmer::exceptional_table_lookup(n, p)) : json(nullptr);
    return j.dump();
}

}  // namespace qf::serialize
