#pragma once

// Line-delimited JSON and CSV records. Integers that can outgrow 64 bits are
// written as decimal strings; small indices (n, m, p, z, s, t) as numbers.
// Keys are emitted in a fixed order so identical inputs give identical bytes.

#include <string>
#include <string_view>
#include <vector>

#include "qfields/arith.hpp"
#include "qfields/classno.hpp"
#include "qfields/families.hpp"
#include "qfields/lehmer.hpp"
#include "qfields/lrn.hpp"

namespace qf::serialize {

inline constexpr std::string_view kTupleSchema = "qfields.tuple/1";
inline constexpr std::string_view kClassNumberSchema = "qfields.classnum/1";
inline constexpr std::string_view kTheorem31Schema = "qfields.thm31/1";
inline constexpr std::string_view kLrnSchema = "qfields.lrn/1";
inline constexpr std::string_view kSquarefreeSchema = "qfields.squarefree/1";
inline constexpr std::string_view kLehmerSchema = "qfields.lehmer/1";
inline constexpr std::string_view kPrimitiveDivisorSchema = "qfields.pdiv/1";

std::string tuple_to_json(const families::FamilyTuple& t);
/// Accepts full records and hand-built ones ({"n": 3, "members": [{"radicand": "-15"}]}).
families::FamilyTuple tuple_from_json(std::string_view line);

std::string tuple_csv_header();
std::vector<std::string> tuple_to_csv(const families::FamilyTuple& t);

std::string class_number_to_json(const classno::ClassNumberResult& r, const BigInt* radicand = nullptr);
std::string theorem31_to_json(const lrn::Theorem31Report& r);
std::string solutions_to_json(const lrn::LrnInstance& inst, std::string_view method,
                              const std::vector<lrn::LrnSolution>& sols);
std::string squarefree_to_json(const arith::SquarefreeDecomposition& sf);
std::string lehmer_to_json(const lehmer::LehmerParams& p, unsigned long n, const BigInt& value);
std::string primitive_divisors_to_json(const lehmer::LehmerParams& p, unsigned long n,
                                       const std::vector<BigInt>& primes);

std::string method_name(classno::Method m);

}  // namespace qf::serialize
