#pragma once

#include <cstdio>
#include <string>

#include <openssl/evp.h>

#include "qg/util.hpp"

namespace qg {

// Content hash in git blob form: sha1("blob <len>\0<content>"), hex encoded.
// Matches `git hash-object` so inputs can be cross-checked against a checkout.
inline std::string git_blob_sha1(const std::string& content) {
  std::string framed = "blob " + std::to_string(content.size());
  framed.push_back('\0');
  framed += content;

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw Error("hash: EVP context allocation failed");
  bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
            EVP_DigestUpdate(ctx, framed.data(), framed.size()) == 1 &&
            EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("hash: sha1 digest failed");

  std::string hex(2 * len, '0');
  for (unsigned int i = 0; i < len; ++i)
    std::snprintf(hex.data() + 2 * i, 3, "%02x", digest[i]);
  return hex;
}

}  // namespace qg
