#pragma once

#include <string>

namespace neighbor {

// RFC 4122 version-4 UUID text (122 random bits from std::random_device).
std::string random_uuid();

}  // namespace neighbor
