#include "propcrit/cartan.hpp"

#include "propcrit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_set>

namespace propcrit {
namespace {

std::string describe_entry(Eigen::Index i, Eigen::Index j) {
    std::ostringstream os;
    os << "entry (" << i << ", " << j << ")";
    return os.str();
}

void require_symmetric(const Matrix& X, const Tolerance& tol, const std::string& who) {
    if (X.rows() != X.cols()) throw DomainError(who + ": not square");
    if (!X.allFinite()) throw DomainError(who + ": non-finite entry");
    const double scale = std::max(1.0, X.norm());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < X.cols(); ++j) {
            if (std::abs(X(i, j) - X(j, i)) > std::max(tol.eps_orth, 1e-12) * scale * 10) {
                throw DomainError(who + ": not symmetric at " + describe_entry(i, j));
            }
        }
    }
}

std::string rounded_key(const Matrix& g) {
    const double grid = 1e-7 * std::max(1.0, g.norm());
    std::string key;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        long long q = std::llround(g.data()[i] / grid);
        key += std::to_string(q == 0 ? 0 : q);
        key += ',';
    }
    return key;
}

Matrix rot2(double t) {
    Matrix R(2, 2);
    R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return R;
}

Matrix rot3_axis(int axis, double t) {
    Matrix R = Matrix::Identity(3, 3);
    const int a = (axis + 1) % 3;
    const int b = (axis + 2) % 3;
    R(a, a) = std::cos(t);
    R(a, b) = -std::sin(t);
    R(b, a) = std::sin(t);
    R(b, b) = std::cos(t);
    return R;
}

std::vector<double> angle_grid(double lo, double hi, double step, bool closed) {
    const auto count = static_cast<long>(std::ceil((hi - lo) / step - 1e-12));
    std::vector<double> out;
    const long n = std::max<long>(count, 1);
    for (long k = 0; k < n; ++k) out.push_back(lo + (hi - lo) * static_cast<double>(k) / n);
    if (closed) out.push_back(hi);
    return out;
}

}  // namespace

AmbientGroup::AmbientGroup(GroupKind kind, int n, const Tolerance& tol)
    : kind_(kind), n_(n),
      space_(FlatSpace::permutations(std::clamp(n, 1, 6), kind == GroupKind::SL, tol)) {
    if (n < 1 || n > 6 || (kind == GroupKind::SL && n < 2)) {
        throw ContractViolation("ambient group: n must be in [1, 6] (GL) or [2, 6] (SL)");
    }
}

std::string AmbientGroup::name() const {
    return std::string(kind_ == GroupKind::SL ? "SL(" : "GL(") + std::to_string(n_) + ",R)";
}

void AmbientGroup::validate_element(const Matrix& g, const Tolerance& tol) const {
    if (g.rows() != n_ || g.cols() != n_) {
        throw DomainError("group element: expected " + std::to_string(n_) + "x" + std::to_string(n_) +
                          " matrix, got " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
    }
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            if (!std::isfinite(g(i, j))) throw DomainError("group element: non-finite " + describe_entry(i, j));
        }
    }
    Eigen::JacobiSVD<Matrix> js(g);
    if (js.singularValues()[n_ - 1] <= tol.eps_rank) {
        // name the entry of largest magnitude in the null direction's row to help locate it
        Eigen::JacobiSVD<Matrix> full(g, Eigen::ComputeFullV);
        Eigen::Index j = 0;
        full.matrixV().col(n_ - 1).cwiseAbs().maxCoeff(&j);
        throw DomainError("group element: singular matrix (smallest singular value " +
                          std::to_string(js.singularValues()[n_ - 1]) + "; column " + std::to_string(j) +
                          " is dependent on the others)");
    }
    if (kind_ == GroupKind::SL) {
        const double det = g.determinant();
        if (std::abs(det - 1.0) > tol.eps_recon * n_) {
            throw DomainError("group element: determinant " + std::to_string(det) + " != 1 for SL");
        }
    }
}

Vector cartan_projection(const Matrix& g, const Tolerance& tol) {
    if (g.rows() != g.cols() || g.rows() == 0) throw DomainError("cartan_projection: not a square matrix");
    if (!g.allFinite()) throw DomainError("cartan_projection: non-finite entry");
    Eigen::JacobiSVD<Matrix> js(g);
    const Vector& s = js.singularValues();
    if (s[s.size() - 1] <= tol.eps_rank) throw DomainError("cartan_projection: singular matrix");
    return s.array().log().matrix();
}

Kak kak_decompose(const Matrix& g, const Tolerance& tol) {
    if (g.rows() != g.cols() || g.rows() == 0) throw DomainError("kak_decompose: not a square matrix");
    Svd f = svd(g, tol);
    const Eigen::Index n = g.rows();
    if (f.s[n - 1] <= tol.eps_rank) throw DomainError("kak_decompose: singular matrix");
    if (g.determinant() > 0 && f.U.determinant() < 0) {
        f.U.col(n - 1) *= -1.0;
        f.V.col(n - 1) *= -1.0;
    }
    return Kak{f.U, f.s.array().log().matrix(), f.V.transpose()};
}

const char* variant_name(const SubgroupSpec& spec) {
    switch (spec.index()) {
        case 0: return "reductive_cartan";
        case 1: return "discrete";
        case 2: return "one_parameter";
        default: return "element_list";
    }
}

bool is_reductive(const SubgroupSpec& spec) {
    return std::holds_alternative<ReductiveCartan>(spec) || std::holds_alternative<OneParameter>(spec);
}

bool is_finite_list(const SubgroupSpec& spec) { return std::holds_alternative<ElementList>(spec); }

namespace {

std::vector<Matrix> reductive_generators(const SubgroupSpec& spec) {
    if (const auto* r = std::get_if<ReductiveCartan>(&spec)) return r->generators;
    return {std::get<OneParameter>(spec).X};
}

void check_reductive(int n, GroupKind kind, const std::vector<Matrix>& gens, const Tolerance& tol) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string who = "generator " + std::to_string(i);
        if (gens[i].rows() != n || gens[i].cols() != n) {
            throw DomainError(who + ": expected " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
        }
        require_symmetric(gens[i], tol, who);
        if (kind == GroupKind::SL && std::abs(gens[i].trace()) > tol.eps_rank * std::max(1.0, gens[i].norm())) {
            throw DomainError(who + ": trace must vanish for SL");
        }
    }
}

}  // namespace

void validate_spec(const AmbientGroup& G, const SubgroupSpec& spec, const Tolerance& tol) {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ReductiveCartan>) {
                if (s.generators.empty()) throw DomainError("reductive spec: no generators");
                check_reductive(G.n(), G.kind(), s.generators, tol);
                simultaneous_diag(s.generators, tol);
            } else if constexpr (std::is_same_v<T, OneParameter>) {
                check_reductive(G.n(), G.kind(), {s.X}, tol);
            } else if constexpr (std::is_same_v<T, Discrete>) {
                if (s.generators.empty()) throw DomainError("discrete spec: no generators");
                for (std::size_t i = 0; i < s.generators.size(); ++i) {
                    try {
                        G.validate_element(s.generators[i], tol);
                    } catch (const DomainError& e) {
                        throw DomainError("generator " + std::to_string(i) + ": " + e.what());
                    }
                }
            } else {
                if (s.elements.empty()) throw DomainError("element list: empty");
                for (std::size_t i = 0; i < s.elements.size(); ++i) {
                    try {
                        G.validate_element(s.elements[i], tol);
                    } catch (const DomainError& e) {
                        throw DomainError("element " + std::to_string(i) + ": " + e.what());
                    }
                }
            }
        },
        spec);
}

std::vector<Matrix> word_ball(const std::vector<Matrix>& generators, int L, std::size_t max_elements,
                              const Tolerance& tol) {
    if (L < 0) throw ContractViolation("word_ball: negative word length");
    if (generators.empty()) throw ContractViolation("word_ball: no generators");
    const Eigen::Index n = generators.front().rows();
    std::vector<Matrix> letters;
    for (const auto& g : generators) {
        letters.push_back(g);
        letters.push_back(g.inverse());
    }
    // letter 2k+1 is the inverse of letter 2k
    std::vector<Matrix> out{Matrix::Identity(n, n)};
    std::vector<int> last{-1};
    std::unordered_set<std::string> seen{rounded_key(out.front())};
    std::size_t begin = 0;
    for (int len = 1; len <= L; ++len) {
        const std::size_t end = out.size();
        for (std::size_t e = begin; e < end; ++e) {
            for (int a = 0; a < static_cast<int>(letters.size()); ++a) {
                if (last[e] >= 0 && (a ^ 1) == last[e]) continue;
                Matrix h = out[e] * letters[static_cast<std::size_t>(a)];
                if (!seen.insert(rounded_key(h)).second) continue;
                if (out.size() >= max_elements) {
                    const double growth = static_cast<double>(out.size()) / std::max<std::size_t>(begin, 1);
                    throw BudgetExceeded("word ball exceeds element budget",
                                         static_cast<std::size_t>(static_cast<double>(out.size()) *
                                                                  std::max(growth, 2.0)));
                }
                out.push_back(std::move(h));
                last.push_back(a);
            }
        }
        begin = end;
    }
    (void)tol;
    return out;
}

StructuredSet a_of_subgroup(const AmbientGroup& G, const SubgroupSpec& spec, int word_length,
                            const Tolerance& tol) {
    validate_spec(G, spec, tol);
    const int n = G.n();
    if (is_reductive(spec)) {
        const auto gens = reductive_generators(spec);
        const auto sd = simultaneous_diag(gens, tol);
        Matrix D(n, static_cast<Eigen::Index>(sd.diags.size()));
        for (std::size_t i = 0; i < sd.diags.size(); ++i) D.col(static_cast<Eigen::Index>(i)) = sd.diags[i];
        const bool zero = D.size() == 0 || D.cwiseAbs().maxCoeff() <= tol.eps_rank;
        const Matrix B = zero ? Matrix(n, 0) : orthonormal_basis(D, tol);
        return symmetrize(StructuredSet::subspaces(n, {B}, tol), G.cartan_space(), tol);
    }
    std::vector<Matrix> elements;
    std::optional<int> budget;
    if (const auto* d = std::get_if<Discrete>(&spec)) {
        if (word_length < 0) throw ContractViolation("a_of_subgroup: negative word length");
        elements = word_ball(d->generators, word_length, 1'000'000, tol);
        budget = word_length;
    } else {
        elements = std::get<ElementList>(spec).elements;
    }
    std::vector<Vector> pts;
    pts.reserve(elements.size());
    for (const auto& h : elements) pts.push_back(cartan_projection(h, tol));
    StructuredSet C = symmetrize(StructuredSet::cloud(n, std::move(pts)), G.cartan_space(), tol);
    C.word_budget = budget;
    return C;
}

int real_rank(const SubgroupSpec& spec, const Tolerance& tol) {
    if (std::holds_alternative<Discrete>(spec)) {
        throw Unsupported("real_rank: not derivable from discrete generators");
    }
    if (std::holds_alternative<ElementList>(spec)) return 0;
    const auto sd = simultaneous_diag(reductive_generators(spec), tol);
    const Eigen::Index n = sd.Q.rows();
    Matrix D(n, static_cast<Eigen::Index>(sd.diags.size()));
    for (std::size_t i = 0; i < sd.diags.size(); ++i) D.col(static_cast<Eigen::Index>(i)) = sd.diags[i];
    if (D.size() == 0 || D.cwiseAbs().maxCoeff() <= tol.eps_rank) return 0;
    return static_cast<int>(orthonormal_basis(D, tol).cols());
}

std::vector<Vector> weyl_orbit(const Vector& v, double eps) {
    std::vector<double> c(v.data(), v.data() + v.size());
    std::sort(c.begin(), c.end(), std::greater<>());
    // snap near-equal coordinates so that permutations of them coincide
    for (std::size_t i = 1; i < c.size(); ++i) {
        if (c[i - 1] - c[i] <= eps) c[i] = c[i - 1];
    }
    std::vector<Vector> out;
    do {
        out.push_back(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size())));
    } while (std::prev_permutation(c.begin(), c.end()));
    return out;
}

CompactNetD group_ball_net(const AmbientGroup& G, double rho, double mesh, std::size_t max_elements) {
    if (!(rho >= 0.0) || !(mesh > 0.0)) throw ContractViolation("group_ball_net: need rho >= 0, mesh > 0");
    const int n = G.n();
    if (n > 3) throw Unsupported("group_ball_net: N <= 3 only");

    // K-net
    std::vector<Matrix> knet;
    if (n == 1) {
        knet.push_back(Matrix::Identity(1, 1));
    } else if (n == 2) {
        for (double t : angle_grid(0.0, 2.0 * std::numbers::pi, mesh, false)) knet.push_back(rot2(t));
    } else {
        for (double a : angle_grid(0.0, 2.0 * std::numbers::pi, mesh, false)) {
            for (double b : angle_grid(0.0, std::numbers::pi, mesh, true)) {
                for (double c : angle_grid(0.0, 2.0 * std::numbers::pi, mesh, false)) {
                    knet.push_back(rot3_axis(2, a) * rot3_axis(1, b) * rot3_axis(2, c));
                }
            }
        }
    }
    if (G.kind() == GroupKind::GL) {
        const std::size_t m = knet.size();
        Matrix F = Matrix::Identity(n, n);
        F(n - 1, n - 1) = -1.0;
        for (std::size_t i = 0; i < m; ++i) knet.push_back(knet[i] * F);
    }

    // chamber grid of ||X|| <= rho/2 in a
    const Matrix basis = G.kind() == GroupKind::SL ? orthogonal_complement(Vector::Ones(n))
                                                   : Matrix(Matrix::Identity(n, n));
    const int dim = static_cast<int>(basis.cols());
    const double half = rho / 2.0;
    const long steps = static_cast<long>(std::ceil(half / mesh));
    std::vector<Vector> xs;
    std::unordered_set<std::string> xkeys;
    std::vector<long> idx(static_cast<std::size_t>(dim), -steps);
    const double reach = half + mesh * std::sqrt(static_cast<double>(dim)) / 2.0;
    while (true) {
        Vector c(dim);
        for (int k = 0; k < dim; ++k) c[k] = static_cast<double>(idx[static_cast<std::size_t>(k)]) * mesh;
        Vector x = basis * c;
        const double nx = x.norm();
        if (nx <= reach + 1e-12) {
            if (nx > half) x *= half / nx;
            std::sort(x.data(), x.data() + x.size(), std::greater<>());
            Matrix key = x;
            if (xkeys.insert(rounded_key(key)).second) xs.push_back(x);
        }
        int k = 0;
        while (k < dim && ++idx[static_cast<std::size_t>(k)] > steps) {
            idx[static_cast<std::size_t>(k)] = -steps;
            ++k;
        }
        if (k == dim) break;
    }
    std::sort(xs.begin(), xs.end(), [](const Vector& a, const Vector& b) { return a.norm() < b.norm(); });

    std::size_t required = 0;
    for (const auto& x : xs) required += x.norm() <= 1e-15 ? knet.size() : knet.size() * knet.size();
    if (required > max_elements) {
        throw BudgetExceeded("group_ball_net: net of " + std::to_string(required) + " elements exceeds budget",
                             required);
    }

    CompactNetD net;
    net.rho = rho;
    net.mesh = mesh;
    net.elements.reserve(required);
    for (const auto& x : xs) {
        const Matrix E = x.array().exp().matrix().asDiagonal();
        if (x.norm() <= 1e-15) {
            for (const auto& k : knet) net.elements.push_back(k);
            continue;
        }
        for (const auto& k1 : knet) {
            const Matrix k1E = k1 * E;
            for (const auto& k2 : knet) net.elements.push_back(k1E * k2);
        }
    }
    return net;
}

}  // namespace propcrit
