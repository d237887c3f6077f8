#pragma once

// Pencil formulations lhs - lambda * rhs for the ordinary, quotient and
// restricted singular value problems: squared (cross products), classical
// augmented, and the cross-product-free 4x4 block forms.

#include <string>
#include <string_view>
#include <vector>

#include "cpfsvd/matrix.hpp"

namespace cpfsvd {

enum class Formulation {
    sq_svd,   ///< (A*A, I)
    aug_svd,  ///< ([0 A; A* 0], I)
    sq_qsvd,  ///< (A*A, C*C)
    aug_qsvd, ///< ([0 A; A* 0], [I 0; 0 C*C])
    aug_rsvd, ///< ([0 A; A* 0], [BB* 0; 0 C*C])
    cpf_svd,
    cpf_qsvd,
    cpf_rsvd,
    qqqq, ///< cpf_rsvd with D*D and EE* in place of the trailing identities
};

std::string_view to_string(Formulation f);
Formulation parse_formulation(std::string_view name);

/// True for the three 4x4-block forms whose spectra come in quadruples.
bool is_cross_product_free(Formulation f);

/// Block partition of the pencil rows and columns, in order.
struct BlockLayout {
    std::vector<size_t> row_blocks;
    std::vector<size_t> col_blocks;

    /// Offset of block b within the row (equivalently column) partition.
    size_t row_offset(size_t b) const;
    size_t col_offset(size_t b) const;
};

struct Pencil {
    CMatrix lhs;
    CMatrix rhs;
    Formulation formulation = Formulation::cpf_svd;
    BlockLayout layout;

    size_t dim() const { return lhs.rows(); }
};

Pencil build_sq_svd(const CMatrix& a);
Pencil build_aug_svd(const CMatrix& a);
Pencil build_sq_qsvd(const CMatrix& a, const CMatrix& c);
Pencil build_aug_qsvd(const CMatrix& a, const CMatrix& c);
Pencil build_aug_rsvd(const CMatrix& a, const CMatrix& b, const CMatrix& c);
Pencil build_cpf_svd(const CMatrix& a);
Pencil build_cpf_qsvd(const CMatrix& a, const CMatrix& c);
Pencil build_cpf_rsvd(const CMatrix& a, const CMatrix& b, const CMatrix& c);
Pencil build_qqqq(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d, const CMatrix& e);

} // namespace cpfsvd
