#pragma once

// The ambient group GL(N,R) or SL(N,R) with K = O(N) resp. SO(N), Cartan
// subspace a = diagonal matrices and Weyl group S_N acting by coordinate
// permutations.

#include "propcrit/flats.hpp"
#include "propcrit/numerics.hpp"

#include <string>
#include <variant>
#include <vector>

namespace propcrit {

enum class GroupKind { GL, SL };

class AmbientGroup {
public:
    /// n in [1, 6] for GL, [2, 6] for SL.
    AmbientGroup(GroupKind kind, int n, const Tolerance& tol = {});

    GroupKind kind() const { return kind_; }
    int n() const { return n_; }
    const FlatSpace& cartan_space() const { return space_; }
    /// Real rank: N - 1 for SL, N for GL.
    int real_rank() const { return kind_ == GroupKind::SL ? n_ - 1 : n_; }
    std::string name() const;

    /// Throws DomainError if g is not an element (wrong size, singular, det != 1 for SL).
    void validate_element(const Matrix& g, const Tolerance& tol = {}) const;

private:
    GroupKind kind_;
    int n_;
    FlatSpace space_;
};

/// Log singular values, descending.
Vector cartan_projection(const Matrix& g, const Tolerance& tol = {});

struct Kak {
    Matrix k1;
    Vector x;  // diagonal of X, equal to cartan_projection(g)
    Matrix k2;
};

/// g = k1 * exp(diag(x)) * k2. When det g > 0 both factors have det +1.
Kak kak_decompose(const Matrix& g, const Tolerance& tol = {});

struct ReductiveCartan {
    std::vector<Matrix> generators;  // commuting symmetric matrices
};
struct Discrete {
    std::vector<Matrix> generators;
};
struct OneParameter {
    Matrix X;  // symmetric
};
struct ElementList {
    std::vector<Matrix> elements;
};

using SubgroupSpec = std::variant<ReductiveCartan, Discrete, OneParameter, ElementList>;

const char* variant_name(const SubgroupSpec& spec);
/// ReductiveCartan or OneParameter: the Cartan image is an exact subspace union.
bool is_reductive(const SubgroupSpec& spec);
/// A finite element list: compact, its Cartan image is an exact bounded set.
bool is_finite_list(const SubgroupSpec& spec);

/// Checks symmetry, commutation, trace and group membership as appropriate.
void validate_spec(const AmbientGroup& G, const SubgroupSpec& spec, const Tolerance& tol = {});

/// Every element given by a reduced word of length <= L in the generators and
/// their inverses, identity first, duplicates merged by Frobenius distance.
/// Throws BudgetExceeded beyond max_elements.
std::vector<Matrix> word_ball(const std::vector<Matrix>& generators, int L,
                              std::size_t max_elements = 1'000'000, const Tolerance& tol = {});

/// The Weyl-saturated Cartan image a(H). Reductive specs give an exact subspace
/// union; element lists an exact finite cloud; discrete specs the projected word
/// ball, tagged empirical with word budget L.
StructuredSet a_of_subgroup(const AmbientGroup& G, const SubgroupSpec& spec, int word_length = 4,
                            const Tolerance& tol = {});

/// Dimension of the span of the simultaneously diagonalized generators.
/// Discrete specs throw Unsupported; element lists have rank 0.
int real_rank(const SubgroupSpec& spec, const Tolerance& tol = {});

/// Distinct coordinate permutations of v, in lexicographically descending order.
std::vector<Vector> weyl_orbit(const Vector& v, double eps = 0.0);

struct CompactNetD {
    double rho = 0.0;
    double mesh = 0.0;
    std::vector<Matrix> elements;
};

/// Net {k exp(X) k'} of D_rho = {g : d(g.*, *) <= rho}, i.e. ||mu(g)|| <= rho/2.
/// N <= 3; refuses nets larger than max_elements.
CompactNetD group_ball_net(const AmbientGroup& G, double rho, double mesh,
                           std::size_t max_elements = 1'000'000);

}  // namespace propcrit
