#pragma once

// Helpers shared by the bridge sources.

#include "kronsheaf/bridge.hpp"

namespace ks::detail {

// Options for presentations derived inside the bridge: the context cap,
// raised to the presentation's own minimum.
GradedOptions opts_for(const Presentation& p, const BridgeContext& ctx);
// Context validation plus field and ambient-space agreement.
void check_sheaf(const Presentation& e, const BridgeContext& ctx);
// Multiplication by h from src to dst, in pinned piece bases.
Mat piece_mult(const Presentation& m, const Piece& src, const Piece& dst, const Form& h);
Mat block_diag(const Mat& x, size_t copies);
Form monomial_form(const FieldPtr& f, const Exp& e);

}  // namespace ks::detail
