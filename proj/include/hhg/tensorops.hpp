#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hhg/complex.hpp"

namespace hhg {

/* Koszul sign (−1)^{pq} as a scalar. */
Scalar koszul_sign(const FieldSpec& f, int p, int q);

/* Canonical label of a tensor-product basis pair; flattening is by string
 * concatenation, so left- and right-associated products share labels. */
std::string tensor_label(const std::string& a, const std::string& b);

/* Basis bookkeeping for a tensor product X ⊗ Y: each basis element of total
 * degree n is a pair (p, i, j) — left degree p, left index i, right index j
 * in degree n − p — stored in a fixed order matching the product complex. */
class TensorLayout {
 public:
  struct Factor {
    int p;           // left degree (right degree = n − p)
    std::size_t i;   // index into the left basis at degree p
    std::size_t j;   // index into the right basis at degree n − p
  };

  TensorLayout() = default;
  TensorLayout(ComplexPtr left, ComplexPtr right, ComplexPtr product,
               std::map<int, std::vector<Factor>> factors);

  const ComplexPtr& left() const { return left_; }
  const ComplexPtr& right() const { return right_; }
  const ComplexPtr& product() const { return product_; }

  const std::vector<Factor>& factors(int n) const;
  std::optional<std::size_t> find(int n, int p, std::size_t i, std::size_t j) const;
  std::size_t index(int n, int p, std::size_t i, std::size_t j) const;  // ShapeError if absent

 private:
  ComplexPtr left_, right_, product_;
  std::map<int, std::vector<Factor>> factors_;
  std::map<int, std::map<std::tuple<int, std::size_t, std::size_t>, std::size_t>> lookup_;
  static const std::vector<Factor> kNoFactors;
};

/* X ⊗ Y with d(a⊗b) = da⊗b + (−1)^{|a|} a⊗db; window is the full range of
 * achievable total degrees, clipped to `clip` when given. */
TensorLayout tensor(const ComplexPtr& x, const ComplexPtr& y,
                    std::optional<DegreeWindow> clip = std::nullopt);

/* (f⊗g)(a⊗b) = (−1)^{|g||a|} f(a)⊗g(b) between prepared layouts. */
GradedMap tensor_map(const GradedMap& f, const GradedMap& g, const TensorLayout& src,
                     const TensorLayout& tgt);
ChainMap tensor_map(const ChainMap& f, const ChainMap& g, const TensorLayout& src,
                    const TensorLayout& tgt);

/* a⊗b ↦ (−1)^{|a||b|} b⊗a. */
ChainMap symmetry(const TensorLayout& xy, const TensorLayout& yx);

/* Label-preserving isomorphism between complexes with equal label sets per
 * degree (used for associativity relabelings); must commute with d. */
ChainMap canonical_relabel(const ComplexPtr& src, const ComplexPtr& tgt);

/* Unit laws as explicit relabelings: k⊗X → X and X⊗k → X where the unit
 * factor is one-dimensional in degree 0 with label "1". */
ChainMap unit_iso_left(const TensorLayout& t);
ChainMap unit_iso_right(const TensorLayout& t);

/* Word basis v₁|⋯|v_k (empty word "1" in degree 0) of total degree inside w;
 * generators must sit in degrees ≥ 1 (NonConnectedError otherwise). */
GradedVectorSpace tensor_algebra_trunc(const GradedVectorSpace& v, const DegreeWindow& w);

/* Split a word label into its letters ("1" → empty). */
std::vector<std::string> split_word(const std::string& word);
std::string join_word(const std::vector<std::string>& letters);

/* s⁻¹V with (s⁻¹V)_n = V_{n+1} and labels s⁻¹v in source order. */
struct Desuspension {
  GradedVectorSpace source;
  GradedVectorSpace shifted;
  static Desuspension of(const GradedVectorSpace& v);
  static std::string label(const std::string& v);
};

}  // namespace hhg
