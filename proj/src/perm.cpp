#include "veerkit/perm.hpp"

#include <algorithm>

#include "veerkit/error.hpp"

namespace veerkit {

namespace {

struct PermTable {
    std::array<Perm4, 24> perms;
    PermTable() {
        std::array<int, 4> a{0, 1, 2, 3};
        int i = 0;
        do {
            perms[i++] = Perm4(a[0], a[1], a[2], a[3]);
        } while (std::next_permutation(a.begin(), a.end()));
    }
};

const PermTable& table() {
    static const PermTable t;
    return t;
}

}  // namespace

int Perm4::index() const {
    // Lehmer code in lexicographic order.
    int idx = 0;
    static constexpr int fact[4] = {6, 2, 1, 1};
    for (int i = 0; i < 4; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < 4; ++j)
            if (img_[j] < img_[i]) ++smaller;
        idx += smaller * fact[i];
    }
    return idx;
}

Perm4 Perm4::from_index(int idx) { return table().perms.at(idx); }

bool Perm4::valid(const std::array<int, 4>& img) {
    bool seen[4] = {false, false, false, false};
    for (int v : img) {
        if (v < 0 || v > 3 || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonInvolutiveGluing: return "NonInvolutiveGluing";
        case ErrorKind::UngluedFace: return "UngluedFace";
        case ErrorKind::InvalidPermutation: return "InvalidPermutation";
        case ErrorKind::SelfGluedFace: return "SelfGluedFace";
        case ErrorKind::WrongValence: return "WrongValence";
        case ErrorKind::RepeatedTetrahedron: return "RepeatedTetrahedron";
        case ErrorKind::NotOrientable: return "NotOrientable";
        case ErrorKind::Disconnected: return "Disconnected";
        case ErrorKind::NonTorusLink: return "NonTorusLink";
        case ErrorKind::MismatchedCuspCount: return "MismatchedCuspCount";
        case ErrorKind::HorizontalOrVerticalSaddle: return "HorizontalOrVerticalSaddle";
        case ErrorKind::BoundExhausted: return "BoundExhausted";
        case ErrorKind::NonManifoldGluing: return "NonManifoldGluing";
        case ErrorKind::NotPseudoAnosov: return "NotPseudoAnosov";
        case ErrorKind::InvalidSurface: return "InvalidSurface";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::SingularJacobian: return "SingularJacobian";
        case ErrorKind::DegenerateDrift: return "DegenerateDrift";
        case ErrorKind::DegenerateShape: return "DegenerateShape";
        case ErrorKind::DegenerateMove: return "DegenerateMove";
        case ErrorKind::VerificationFailed: return "VerificationFailed";
        case ErrorKind::NotCertified: return "NotCertified";
        case ErrorKind::BudgetExhausted: return "BudgetExhausted";
        case ErrorKind::TransportDegenerate: return "TransportDegenerate";
        case ErrorKind::NotNonGeometric: return "NotNonGeometric";
        case ErrorKind::ParityViolation: return "ParityViolation";
        case ErrorKind::NonPositiveGenus: return "NonPositiveGenus";
        case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

}  // namespace veerkit
