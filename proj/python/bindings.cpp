#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qfields/arith.hpp"
#include "qfields/classno.hpp"
#include "qfields/cli.hpp"
#include "qfields/errors.hpp"
#include "qfields/families.hpp"
#include "qfields/lehmer.hpp"
#include "qfields/lrn.hpp"
#include "qfields/serialize.hpp"

namespace py = pybind11;

// Python ints <-> mpz_class through their decimal text. Not fast, but exact
// at any size and these calls are never the hot path.
namespace pybind11::detail {
template <>
struct type_caster<mpz_class> {
    PYBIND11_TYPE_CASTER(mpz_class, const_name("int"));

    bool load(handle src, bool) {
        if (!src || !PyLong_Check(src.ptr()) || PyBool_Check(src.ptr())) return false;
        const auto text = py::str(src).cast<std::string>();
        value = qf::parse_bigint(text);
        return true;
    }

    static handle cast(const mpz_class& v, return_value_policy, handle) {
        const std::string text = qf::to_string(v);
        return PyLong_FromString(text.c_str(), nullptr, 10);
    }
};
}  // namespace pybind11::detail

namespace {

using qf::BigInt;

py::object from_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

std::string to_json(const py::object& obj) { return py::module_::import("json").attr("dumps")(obj).cast<std::string>(); }

qf::classno::FormCountOptions form_options(unsigned threads, bool forms) {
    qf::classno::FormCountOptions o;
    o.threads = threads;
    o.collect_forms = forms;
    return o;
}

qf::families::ConstructOptions construct_options(const std::string& mode) {
    qf::families::ConstructOptions o;
    if (mode == "strict") o.mode = qf::families::Mode::Strict;
    else if (mode == "lenient") o.mode = qf::families::Mode::Lenient;
    else throw qf::DomainError("mode must be 'strict' or 'lenient'");
    return o;
}

py::object finish_tuple(qf::families::FamilyTuple t, bool verify, unsigned threads) {
    if (verify) {
        qf::families::VerifyOptions o;
        o.threads = threads;
        py::gil_scoped_release release;
        t = qf::families::verify_tuple(std::move(t), o);
    }
    return from_json(qf::serialize::tuple_to_json(t));
}

}  // namespace

PYBIND11_MODULE(_qfields, m) {
    m.doc() = "Class numbers, Lehmer sequences and divisibility families for imaginary quadratic fields";

    auto budget = py::register_exception<qf::ResourceError>(m, "BudgetExceeded", PyExc_RuntimeError);
    py::register_exception<qf::Rejection>(m, "Rejection", PyExc_ValueError);
    py::register_exception<qf::DomainError>(m, "DomainError", PyExc_ValueError);
    (void)budget;

    m.def("is_prime", &qf::arith::is_prime, py::arg("m"));
    m.def(
        "factorize",
        [](const BigInt& n) {
            std::vector<std::pair<BigInt, unsigned>> out;
            for (const auto& f : qf::arith::factorize(n).factors) out.emplace_back(f.prime, f.exponent);
            return out;
        },
        py::arg("m"));
    m.def(
        "squarefree_decompose",
        [](const BigInt& n) {
            const auto sf = qf::arith::squarefree_decompose(n);
            return std::make_pair(sf.s, sf.f);
        },
        py::arg("m"), "m = s * f**2 with s square-free; returns (s, f)");
    m.def("kronecker", &qf::arith::kronecker, py::arg("D"), py::arg("n"));

    m.def(
        "class_number",
        [](const BigInt& D, const std::string& method, unsigned threads) {
            if (method == "dirichlet") return qf::classno::class_number_dirichlet(D).h;
            if (method != "form-count") throw qf::DomainError("method must be 'form-count' or 'dirichlet'");
            py::gil_scoped_release release;
            return qf::classno::class_number_forms(D, form_options(threads, false)).h;
        },
        py::arg("D"), py::arg("method") = "form-count", py::arg("threads") = 1,
        "h*(D) for a negative discriminant D");
    m.def(
        "reduced_forms",
        [](const BigInt& D) {
            std::vector<std::tuple<BigInt, BigInt, BigInt>> out;
            const auto r = qf::classno::class_number_forms(D, form_options(1, true));
            for (const auto& f : *r.reduced_forms) {
                out.emplace_back(f.a, f.b, f.c);
            }
            return out;
        },
        py::arg("D"));
    m.def(
        "reduce_form",
        [](const BigInt& a, const BigInt& b, const BigInt& c) {
            const auto f = qf::classno::reduce_form({a, b, c});
            return std::make_tuple(f.a, f.b, f.c);
        },
        py::arg("a"), py::arg("b"), py::arg("c"));
    m.def(
        "field_class_number",
        [](const BigInt& d, unsigned threads) {
            py::gil_scoped_release release;
            return qf::classno::field_class_number(d, form_options(threads, false)).h;
        },
        py::arg("d"), py::arg("threads") = 1, "class number of Q(sqrt(d)), d < 0 square-free");

    m.def(
        "lehmer_number",
        [](const BigInt& a, const BigInt& b, unsigned long n) {
            return qf::lehmer::lehmer_number(qf::lehmer::LehmerParams::make(a, b), n);
        },
        py::arg("a"), py::arg("b"), py::arg("n"));
    m.def(
        "has_primitive_divisor",
        [](const BigInt& a, const BigInt& b, unsigned long n) {
            return qf::lehmer::has_primitive_divisor(qf::lehmer::LehmerParams::make(a, b), n);
        },
        py::arg("a"), py::arg("b"), py::arg("n"));
    m.def(
        "primitive_divisors",
        [](const BigInt& a, const BigInt& b, unsigned long n) {
            return qf::lehmer::primitive_divisors(qf::lehmer::LehmerParams::make(a, b), n);
        },
        py::arg("a"), py::arg("b"), py::arg("n"));
    m.def(
        "exceptional_table_lookup",
        [](unsigned long t, const BigInt& a, const BigInt& b) {
            return qf::lehmer::exceptional_table_lookup(t, qf::lehmer::LehmerParams::make(a, b));
        },
        py::arg("t"), py::arg("a"), py::arg("b"));
    m.def("lehmer_table", [] { return from_json(std::string(qf::lehmer::table_json())); });

    m.def(
        "lrn_solve",
        [](const BigInt& d, const BigInt& ell, unsigned z_max, const std::string& method) {
            const qf::lrn::LrnInstance inst{d, ell, z_max};
            std::vector<qf::lrn::LrnSolution> sols;
            if (method == "brute") sols = qf::lrn::solve_brute(inst);
            else if (method == "structured") sols = qf::lrn::solve_structured(inst);
            else throw qf::DomainError("method must be 'structured' or 'brute'");
            return from_json(qf::serialize::solutions_to_json(inst, method, sols)).attr("__getitem__")("solutions");
        },
        py::arg("d"), py::arg("ell"), py::arg("z_max"), py::arg("method") = "structured");
    m.def(
        "theorem31_verify",
        [](const BigInt& ell, const BigInt& n, const BigInt& p) {
            qf::lrn::Theorem31Report r;
            {
                py::gil_scoped_release release;
                r = qf::lrn::theorem31_verify(ell, n, p);
            }
            return from_json(qf::serialize::theorem31_to_json(r));
        },
        py::arg("ell"), py::arg("n"), py::arg("p"));

    m.def(
        "quadruple",
        [](unsigned n, long p, const BigInt& k, bool verify, unsigned threads) {
            return finish_tuple(qf::families::quadruple(n, p, k), verify, threads);
        },
        py::arg("n"), py::arg("p"), py::arg("k"), py::arg("verify") = false, py::arg("threads") = 1);
    m.def(
        "quintuple",
        [](unsigned n, const BigInt& k, bool verify, unsigned threads) {
            return finish_tuple(qf::families::quintuple(n, k), verify, threads);
        },
        py::arg("n"), py::arg("k"), py::arg("verify") = false, py::arg("threads") = 1);
    m.def(
        "pi_tuple",
        [](unsigned n, long m_bound, const BigInt& k, const std::string& mode, bool verify, unsigned threads) {
            return finish_tuple(qf::families::pi_tuple(n, m_bound, k, construct_options(mode)), verify, threads);
        },
        py::arg("n"), py::arg("m"), py::arg("k"), py::arg("mode") = "strict", py::arg("verify") = false,
        py::arg("threads") = 1);
    m.def(
        "verify_tuple",
        [](const py::object& record, unsigned threads) {
            return finish_tuple(qf::serialize::tuple_from_json(to_json(record)), true, threads);
        },
        py::arg("record"), py::arg("threads") = 1, "record: a dict in the qfields.tuple/1 layout");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{"qfields"};
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = qf::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "returns (exit_code, stdout, stderr)");
}
