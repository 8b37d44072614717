#pragma once

namespace bidomain {

/// Kernel execution policy. Results are bitwise identical under both policies:
/// parallel loops only ever compute independent per-element or per-column
/// blocks, and all reductions run in a fixed serial order.
enum class Exec { serial, parallel };

}  // namespace bidomain
