#pragma once

#include <string>
#include <string_view>

#include "nudgelab/domain/types.hpp"

namespace nudgelab {

// Pseudonym of caption text or image identity: SHA-256 over the UTF-8 bytes
// of "<user_id>:<content>". The user id salts the digest so equal content
// from different users does not link.
ContentDigest digest_content(UserId user_id, std::string_view content);

// First 8 hex characters of SHA-256("<user_id>:<secret>"), uppercased.
// Throws Error(Configuration) on an empty secret.
std::string make_registration_code(UserId user_id, std::string_view server_secret);

}  // namespace nudgelab
