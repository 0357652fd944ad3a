#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace hadacov::oracle {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

// Per-class counts over all (n d p)^k index tuples (I, M, J) whose closed
// walks survive the parity criterion: for unit Rademacher entries a tuple
// contributes 1 exactly when every X-edge {i,m} and every Y-edge {i,j} has
// even multiplicity, else 0.
//
// Classes: (a) every edge multiplicity is exactly 2 in both walk graphs;
// (b) the X-walk graph is a double tree (all multiplicities 2 and
// #distinct edges = #distinct vertices - 1; walk graphs are connected by
// construction); (c) the position partition induced by the m-walk equals the
// one induced by the j-walk (mirror symmetry). tree_class counts a & b & c.
struct walk_class_counts {
    int k = 0;
    int n = 0, d = 0, p = 0;
    bigint contributing = 0;
    bigint all_mult_two = 0;
    bigint x_double_tree = 0;
    bigint mirror_symmetric = 0;
    bigint tree_class = 0;

    bigint denominator() const;            // n d^k p^k
    rational exact_moment() const;         // contributing / denominator
    rational tree_class_mass() const;      // tree_class / denominator
};

// Throws resource_error when (n d p)^k exceeds 1e8 tuples, with the estimate.
void check_enumeration_guard(int k, int n, int d, int p);

// Exact E[(1/n) Tr M^k] for unit-Rademacher X, Y by full parity enumeration.
rational exact_moment_rademacher(int k, int n, int d, int p);

walk_class_counts enumerate_contributing_walks(int k, int n, int d, int p);

// (1/(s+1)) C(k-1,s) C(k,s) as an exact rational; its value is the integer
// Narayana number N(k, s+1).
rational count_tree_shapes(int k, int s);

// The finite-size tree display in exact arithmetic:
//   sum_s N(k,s+1) n^(s+1 falling) d^(k-s falling) p^(k-s falling) / (n d^k p^k).
rational tree_moment_rational(int k, int n, int d, int p);

}
