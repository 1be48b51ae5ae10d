#include "nudgelab/domain/crypto.hpp"

#include <array>
#include <charconv>
#include <vector>

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include "nudgelab/domain/error.hpp"

namespace nudgelab::crypto {
namespace {

constexpr char kHex[] = "0123456789abcdef";

std::string to_hex(const unsigned char* data, std::size_t n) {
  std::string out(n * 2, '0');
  for (std::size_t i = 0; i < n; ++i) {
    out[2 * i] = kHex[data[i] >> 4];
    out[2 * i + 1] = kHex[data[i] & 0x0f];
  }
  return out;
}

std::vector<unsigned char> from_hex(std::string_view hex) {
  std::vector<unsigned char> out;
  if (hex.size() % 2 != 0) return out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    unsigned value = 0;
    auto [p, ec] = std::from_chars(hex.data() + i, hex.data() + i + 2, value, 16);
    if (ec != std::errc{} || p != hex.data() + i + 2) return {};
    out.push_back(static_cast<unsigned char>(value));
  }
  return out;
}

void fill_random(unsigned char* buf, std::size_t n) {
  if (RAND_bytes(buf, static_cast<int>(n)) != 1) {
    throw Error(ErrorCode::Storage, "CSPRNG failure");
  }
}

constexpr std::size_t kSaltBytes = 16;
constexpr std::size_t kKeyBytes = 32;

std::string pbkdf2(std::string_view password, const unsigned char* salt,
                   std::size_t salt_len, int iterations) {
  std::array<unsigned char, kKeyBytes> key{};
  if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt,
                        static_cast<int>(salt_len), iterations, EVP_sha256(),
                        static_cast<int>(key.size()), key.data()) != 1) {
    throw Error(ErrorCode::Storage, "PBKDF2 failure");
  }
  return to_hex(key.data(), key.size());
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Storage, "SHA-256 failure");
  }
  return to_hex(md.data(), len);
}

std::string random_hex(std::size_t count) {
  std::vector<unsigned char> buf(count);
  fill_random(buf.data(), buf.size());
  return to_hex(buf.data(), buf.size());
}

std::string new_uuid() {
  std::array<unsigned char, 16> b{};
  fill_random(b.data(), b.size());
  b[6] = static_cast<unsigned char>((b[6] & 0x0f) | 0x40);
  b[8] = static_cast<unsigned char>((b[8] & 0x3f) | 0x80);
  std::string hex = to_hex(b.data(), b.size());
  return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) + "-" +
         hex.substr(16, 4) + "-" + hex.substr(20, 12);
}

std::string hash_password(std::string_view password, int iterations) {
  if (iterations < 1) throw Error(ErrorCode::Configuration, "password_iterations must be >= 1");
  std::array<unsigned char, kSaltBytes> salt{};
  fill_random(salt.data(), salt.size());
  return "pbkdf2-sha256$" + std::to_string(iterations) + "$" +
         to_hex(salt.data(), salt.size()) + "$" +
         pbkdf2(password, salt.data(), salt.size(), iterations);
}

bool verify_password(std::string_view password, std::string_view stored) {
  constexpr std::string_view prefix = "pbkdf2-sha256$";
  if (!stored.starts_with(prefix)) return false;
  stored.remove_prefix(prefix.size());
  auto d1 = stored.find('$');
  if (d1 == std::string_view::npos) return false;
  auto d2 = stored.find('$', d1 + 1);
  if (d2 == std::string_view::npos) return false;

  int iterations = 0;
  auto iter_text = stored.substr(0, d1);
  auto [p, ec] = std::from_chars(iter_text.data(), iter_text.data() + iter_text.size(), iterations);
  if (ec != std::errc{} || iterations < 1) return false;

  auto salt = from_hex(stored.substr(d1 + 1, d2 - d1 - 1));
  auto expected = stored.substr(d2 + 1);
  if (salt.empty() || expected.size() != kKeyBytes * 2) return false;

  std::string actual = pbkdf2(password, salt.data(), salt.size(), iterations);
  return CRYPTO_memcmp(actual.data(), expected.data(), actual.size()) == 0;
}

}  // namespace nudgelab::crypto
