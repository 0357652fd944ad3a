#include "hadacov/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hadacov/errors.hpp"

namespace hadacov::oracle {

namespace {

bigint int_pow(bigint base, int e) {
    bigint r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

bigint binom_big(int n, int r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    bigint v = 1;
    for (int i = 1; i <= r; ++i) {
        v *= (n - r + i);
        v /= i;
    }
    return v;
}

// odometer advance; returns false after the last combination
bool advance(std::vector<int>& digits, int base) {
    for (std::size_t pos = 0; pos < digits.size(); ++pos) {
        if (++digits[pos] < base) return true;
        digits[pos] = 0;
    }
    return false;
}

// sorted 2k edge codes have all-even multiplicities iff they pair up adjacently
bool paired(std::vector<std::int64_t>& codes) {
    std::sort(codes.begin(), codes.end());
    for (std::size_t i = 0; i + 1 < codes.size(); i += 2)
        if (codes[i] != codes[i + 1]) return false;
    return true;
}

// requires paired(): every multiplicity exactly 2 iff consecutive pairs differ
bool all_exactly_two(const std::vector<std::int64_t>& codes) {
    for (std::size_t i = 1; i + 1 < codes.size(); i += 2)
        if (codes[i] == codes[i + 1]) return false;
    return true;
}

int distinct_count(const std::vector<int>& vals) {
    int cnt = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < i; ++j)
            if (vals[j] == vals[i]) { seen = true; break; }
        if (!seen) ++cnt;
    }
    return cnt;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    for (std::size_t s = 0; s < a.size(); ++s)
        for (std::size_t t = s + 1; t < a.size(); ++t)
            if ((a[s] == a[t]) != (b[s] == b[t])) return false;
    return true;
}

void build_edges(const std::vector<int>& I, const std::vector<int>& cols,
                 std::vector<std::int64_t>& codes) {
    const std::size_t k = I.size();
    codes.clear();
    for (std::size_t t = 0; t < k; ++t) {
        std::int64_t c = static_cast<std::int64_t>(cols[t]);
        codes.push_back((static_cast<std::int64_t>(I[t]) << 32) | c);
        codes.push_back((static_cast<std::int64_t>(I[(t + 1) % k]) << 32) | c);
    }
}

struct slot_counts {
    std::int64_t contributing = 0, all2 = 0, xdt = 0, mirror = 0, tree = 0;
};

}  // namespace

bigint walk_class_counts::denominator() const {
    return bigint(n) * int_pow(bigint(d), k) * int_pow(bigint(p), k);
}

rational walk_class_counts::exact_moment() const {
    return rational(contributing, denominator());
}

rational walk_class_counts::tree_class_mass() const {
    return rational(tree_class, denominator());
}

void check_enumeration_guard(int k, int n, int d, int p) {
    if (k < 1) throw config_error("enumeration requires k >= 1");
    if (n < 1 || d < 1 || p < 1) throw config_error("dimensions must be >= 1");
    long double cost = std::pow(static_cast<long double>(n) * d * p, k);
    if (cost > 1e8L)
        throw resource_error("enumeration over (n*d*p)^k ~ " +
                             std::to_string(static_cast<double>(cost)) +
                             " tuples exceeds the 1e8 guard; shrink k or the dimensions");
}

walk_class_counts enumerate_contributing_walks(int k, int n, int d, int p) {
    check_enumeration_guard(k, n, d, p);
    std::vector<slot_counts> slots(n);

    // leading-index parallelism; per-slot exact integer partials merged in order
#pragma omp parallel for schedule(dynamic)
    for (int i1 = 0; i1 < n; ++i1) {
        slot_counts local;
        std::vector<int> I(k), Mw(k), Jw(k);
        std::vector<std::int64_t> xcodes, ycodes;
        xcodes.reserve(2 * k);
        ycodes.reserve(2 * k);
        std::vector<int> tail(k - 1, 0);  // i_2..i_k
        I[0] = i1;
        do {
            for (int t = 1; t < k; ++t) I[t] = tail[t - 1];
            std::fill(Mw.begin(), Mw.end(), 0);
            do {
                build_edges(I, Mw, xcodes);
                if (!paired(xcodes)) continue;
                bool x_all2 = all_exactly_two(xcodes);
                int nverts = distinct_count(I) + distinct_count(Mw);
                int nedges = 0;  // distinct edges in the sorted list
                for (std::size_t q = 0; q < xcodes.size(); ++q)
                    if (q == 0 || xcodes[q] != xcodes[q - 1]) ++nedges;
                bool x_dt = x_all2 && (nedges == nverts - 1);
                std::fill(Jw.begin(), Jw.end(), 0);
                do {
                    build_edges(I, Jw, ycodes);
                    if (!paired(ycodes)) continue;
                    ++local.contributing;
                    bool y_all2 = all_exactly_two(ycodes);
                    bool a = x_all2 && y_all2;
                    bool c = same_partition(Mw, Jw);
                    if (a) ++local.all2;
                    if (x_dt) ++local.xdt;
                    if (c) ++local.mirror;
                    if (a && x_dt && c) ++local.tree;
                } while (advance(Jw, p));
            } while (advance(Mw, d));
        } while (k > 1 && advance(tail, n));
        slots[i1] = local;
    }

    walk_class_counts out;
    out.k = k;
    out.n = n;
    out.d = d;
    out.p = p;
    for (const auto& s : slots) {
        out.contributing += s.contributing;
        out.all_mult_two += s.all2;
        out.x_double_tree += s.xdt;
        out.mirror_symmetric += s.mirror;
        out.tree_class += s.tree;
    }
    return out;
}

rational exact_moment_rademacher(int k, int n, int d, int p) {
    return enumerate_contributing_walks(k, n, d, p).exact_moment();
}

rational count_tree_shapes(int k, int s) {
    if (k < 1 || s < 0 || s > k - 1)
        throw config_error("count_tree_shapes requires k >= 1 and 0 <= s <= k-1");
    return rational(binom_big(k - 1, s) * binom_big(k, s), bigint(s + 1));
}

rational tree_moment_rational(int k, int n, int d, int p) {
    if (k < 1) throw config_error("tree moment requires k >= 1");
    if (n < 1 || d < 1 || p < 1) throw config_error("dimensions must be >= 1");
    rational sum = 0;
    for (int s = 0; s <= k - 1; ++s) {
        if (s + 1 > n || k - s > d || k - s > p) continue;
        bigint num = binom_big(k - 1, s) * binom_big(k, s) / bigint(s + 1);
        for (int t = 0; t <= s; ++t) num *= (n - t);
        for (int t = 0; t < k - s; ++t) num *= (d - t);
        for (int t = 0; t < k - s; ++t) num *= (p - t);
        sum += rational(num, bigint(n) * int_pow(bigint(d), k) * int_pow(bigint(p), k));
    }
    return sum;
}

}
