#pragma once

namespace ks {

enum class Ordering { Less, Equal, Greater };

}  // namespace ks
