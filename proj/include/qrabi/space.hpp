#pragma once

#include <initializer_list>
#include <vector>

#include "qrabi/common.hpp"

namespace qrabi {

// A Hilbert-space factor: the three-level system or a Fock mode truncated at
// occupation nmax (basis |0>..|nmax>, dimension nmax+1).
struct Factor {
    enum Kind { Qutrit, Fock } kind = Qutrit;
    int nmax = 0;  // Fock only

    int dim() const { return kind == Qutrit ? 3 : nmax + 1; }
    bool operator==(const Factor&) const = default;
};

inline Factor qutrit() { return {Factor::Qutrit, 0}; }

inline Factor fock(int nmax) {
    require_valid(nmax >= 1, "Fock truncation must satisfy nmax >= 1");
    return {Factor::Fock, nmax};
}

// Ordered factor list; index layout is row-major over factors in declared
// order (leftmost factor has the largest stride).
struct HilbertSpace {
    std::vector<Factor> factors;

    HilbertSpace() = default;
    HilbertSpace(std::initializer_list<Factor> fs) : factors(fs) {}
    explicit HilbertSpace(std::vector<Factor> fs) : factors(std::move(fs)) {}

    long dim() const {
        long d = 1;
        for (const auto& f : factors) d *= f.dim();
        return d;
    }

    int nfactors() const { return static_cast<int>(factors.size()); }

    long stride(int slot) const {
        require(slot >= 0 && slot < nfactors(), "factor slot out of range");
        long s = 1;
        for (int i = slot + 1; i < nfactors(); ++i) s *= factors[i].dim();
        return s;
    }

    long flatten(const std::vector<int>& idx) const {
        require(static_cast<int>(idx.size()) == nfactors(), "index rank mismatch");
        long flat = 0;
        for (int i = 0; i < nfactors(); ++i) {
            require(idx[i] >= 0 && idx[i] < factors[i].dim(), "factor index out of range");
            flat = flat * factors[i].dim() + idx[i];
        }
        return flat;
    }

    std::vector<int> unflatten(long flat) const {
        std::vector<int> idx(factors.size());
        for (int i = nfactors() - 1; i >= 0; --i) {
            const int d = factors[i].dim();
            idx[i] = static_cast<int>(flat % d);
            flat /= d;
        }
        return idx;
    }

    int count(Factor::Kind kind) const {
        int c = 0;
        for (const auto& f : factors) c += (f.kind == kind);
        return c;
    }

    bool operator==(const HilbertSpace&) const = default;
};

}  // namespace qrabi
