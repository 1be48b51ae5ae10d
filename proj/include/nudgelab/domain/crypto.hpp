#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace nudgelab::crypto {

// Lowercase hex SHA-256 of the raw bytes.
std::string sha256_hex(std::string_view bytes);

// Hex encoding of `count` bytes from the OpenSSL CSPRNG.
std::string random_hex(std::size_t count);

// Random version-4 UUID, lowercase.
std::string new_uuid();

// "pbkdf2-sha256$<iterations>$<salt hex>$<derived key hex>"
std::string hash_password(std::string_view password, int iterations);
bool verify_password(std::string_view password, std::string_view stored);

}  // namespace nudgelab::crypto
