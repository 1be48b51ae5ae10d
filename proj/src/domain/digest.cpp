#include "nudgelab/domain/digest.hpp"

#include <algorithm>
#include <cctype>

#include "nudgelab/domain/crypto.hpp"
#include "nudgelab/domain/error.hpp"

namespace nudgelab {

ContentDigest digest_content(UserId user_id, std::string_view content) {
  std::string input = std::to_string(user_id);
  input += ':';
  input.append(content);
  return *ContentDigest::parse(crypto::sha256_hex(input));
}

std::string make_registration_code(UserId user_id, std::string_view server_secret) {
  if (server_secret.empty()) {
    throw Error(ErrorCode::Configuration, "server secret must not be empty");
  }
  std::string input = std::to_string(user_id);
  input += ':';
  input.append(server_secret);
  std::string code = crypto::sha256_hex(input).substr(0, 8);
  std::transform(code.begin(), code.end(), code.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return code;
}

}  // namespace nudgelab
