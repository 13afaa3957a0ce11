"""Zheng-style signcryption: one pass gives encryption plus an SDSS-shaped tag.

Sender A, holding the recipient's public key y_B, picks a nonce k and derives
cipher/MAC keys from the shared element y_B^k mod p. The recipient rebuilds
the same element as (y_A * g^r)^(s * x_B) mod p, decrypts, and accepts only if
the keyed hash of (message, bind_info) reduces back to r.
"""

from __future__ import annotations

from dataclasses import dataclass

from .crypto_suite import CryptoSuite, derive_keys, keyed_hash_to_scalar
from .errors import RngFailure, TagMismatch
from .group_math import (
    GroupElement,
    GroupParams,
    Scalar,
    modexp,
    modinv,
    rand_scalar_nonzero,
)
from .sdss import KeyPair

_RETRY_BUDGET = 1000


@dataclass(frozen=True)
class SigncryptedText:
    c: bytes
    r: Scalar
    s: Scalar


def signcrypt_with_nonce(m: bytes, sender: KeyPair, recipient_pub: GroupElement,
                         bind_info: bytes, k: Scalar, params: GroupParams,
                         suite: CryptoSuite) -> SigncryptedText | None:
    """One signcryption attempt with a fixed nonce; None when r is degenerate.

    Split out so tests can drive known nonces and check the key agreement.
    """
    p, q = params.p, params.q
    shared = modexp(recipient_pub, k, p)
    keys = derive_keys(shared, suite)
    r = keyed_hash_to_scalar(keys.k2, m, bind_info, q, suite)
    denom = (r + sender.x) % q
    if r == 0 or denom == 0:
        return None
    s = k * modinv(denom, q) % q
    return SigncryptedText(c=suite.cipher_encrypt(keys.k1, m), r=r, s=s)


def signcrypt(m: bytes, sender: KeyPair, recipient_pub: GroupElement,
              bind_info: bytes, params: GroupParams, suite: CryptoSuite,
              rng) -> SigncryptedText:
    for _ in range(_RETRY_BUDGET):
        k = rand_scalar_nonzero(rng, params.q)
        ct = signcrypt_with_nonce(m, sender, recipient_pub, bind_info, k, params, suite)
        if ct is not None:  # degenerate r: fresh k gives fresh keys, hence fresh r
            return ct
    raise RngFailure("signcrypt kept hitting degenerate r; suspect rng or hash stub")


def unsigncrypt(ct: SigncryptedText, recipient: KeyPair,
                sender_pub: GroupElement, bind_info: bytes,
                params: GroupParams, suite: CryptoSuite) -> bytes:
    """Decrypt-and-verify. Returns the message or raises TagMismatch;
    nothing of the plaintext is exposed on failure."""
    p, q = params.p, params.q
    if not (0 < ct.r < q and 0 < ct.s < q):
        raise TagMismatch("scalar out of range")  # rejects s+q style re-encodings
    base = sender_pub * modexp(params.g, ct.r, p) % p
    shared = modexp(base, ct.s * recipient.x % q, p)
    keys = derive_keys(shared, suite)
    m = suite.cipher_decrypt(keys.k1, ct.c)
    if keyed_hash_to_scalar(keys.k2, m, bind_info, q, suite) != ct.r:
        raise TagMismatch("keyed-hash check failed")
    return m
