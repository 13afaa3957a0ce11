"""Blind signcryption: signer A blindly signs what requester B encrypts to C.

B runs the blind-SDSS session against A, but derives r from a keyed hash
instead of a plain hash: B picks u, computes the shared element y_C^u mod p,
splits it into cipher/MAC keys, encrypts m under k1, and sets
r = KH_k2(m, bind_info) mod q. A never sees m, c, or r - only the blinded
challenge r_bar. The delivered text is (c, r, s, T).

Recipient C rebuilds the shared element as (y_A * T * g^r)^(s * x_C) mod p
(the signature check and the key agreement are the same exponentiation),
decrypts, and accepts only if the keyed hash reduces back to r.

The signer half of the session is byte-for-byte the blind-SDSS one, so it is
shared: `bsc_signer_commit` / `bsc_signer_respond` are aliases.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blind_sdss import (
    ChallengeMsg,
    RequesterState,
    signer_commit as bsc_signer_commit,
    signer_respond as bsc_signer_respond,
)
from .crypto_suite import CryptoSuite, SplitKeys, derive_keys, keyed_hash_to_scalar
from .errors import (
    BadCommit,
    DegenerateDenominator,
    InvalidState,
    RngFailure,
    TagMismatch,
)
from .group_math import (
    GroupElement,
    GroupParams,
    Scalar,
    modexp,
    modinv,
    rand_scalar,
    rand_scalar_nonzero,
)
from .sdss import KeyPair

__all__ = [
    "BlindSigncryptedText",
    "BscRequesterSession",
    "bsc_signer_commit",
    "bsc_signer_respond",
    "bsc_requester_challenge",
    "bsc_requester_finalize",
    "unsigncrypt",
]

_RETRY_BUDGET = 1000


@dataclass(frozen=True)
class BlindSigncryptedText:
    c: bytes
    r: Scalar
    s: Scalar
    T: GroupElement


@dataclass
class BscRequesterSession:
    params: GroupParams
    suite: CryptoSuite
    bind_info: bytes
    u: Scalar
    alpha: Scalar
    beta: Scalar
    r: Scalar
    r_bar: Scalar
    T: GroupElement
    keys: SplitKeys
    c: bytes
    state: RequesterState


def bsc_requester_challenge(m: bytes, z: GroupElement,
                            recipient_pub: GroupElement, bind_info: bytes,
                            params: GroupParams, suite: CryptoSuite,
                            rng) -> tuple[BscRequesterSession, ChallengeMsg]:
    """Encrypt m to the recipient and send the blinded challenge.

    Execution order: u -> shared -> key split -> c -> r -> beta, r_bar ->
    alpha, T. A zero r forces a fresh u (fresh u means fresh keys and hence a
    fresh r); a zero r_bar forces a fresh beta.
    """
    p, q = params.p, params.q
    if not 0 < z < p:
        raise BadCommit(f"commitment z = {z} is outside [1, p-1]")
    if z % q == 0:
        raise BadCommit(f"commitment z = {z} is divisible by q")

    for _ in range(_RETRY_BUDGET):
        u = rand_scalar_nonzero(rng, q)
        shared = modexp(recipient_pub, u, p)
        keys = derive_keys(shared, suite)
        r = keyed_hash_to_scalar(keys.k2, m, bind_info, q, suite)
        if r != 0:
            break
    else:
        raise RngFailure("could not reach a nonzero keyed hash")
    c = suite.cipher_encrypt(keys.k1, m)

    for _ in range(_RETRY_BUDGET):
        beta = rand_scalar(rng, q)
        r_bar = (r + beta) % q
        if r_bar != 0:
            break
    else:
        raise RngFailure("could not reach a nonzero challenge")

    alpha = rand_scalar(rng, q)
    T = modexp(z, r_bar, p) * modexp(params.g, alpha, p) % p

    session = BscRequesterSession(params=params, suite=suite, bind_info=bind_info,
                                  u=u, alpha=alpha, beta=beta, r=r, r_bar=r_bar,
                                  T=T, keys=keys, c=c,
                                  state=RequesterState.CHALLENGED)
    return session, ChallengeMsg(r_bar=r_bar)


def bsc_requester_finalize(session: BscRequesterSession, s_bar: Scalar,
                           params: GroupParams) -> BlindSigncryptedText:
    """Unblind the response and emit the signcrypted text (c, r, s, T)."""
    if session.state is not RequesterState.CHALLENGED:
        raise InvalidState(f"cannot finalize in state {session.state.value}")
    q = params.q
    denom = (session.r + s_bar + session.alpha) % q
    if denom == 0:
        session.state = RequesterState.DONE
        raise DegenerateDenominator("r + s_bar + alpha = 0 mod q; restart the session")
    s = session.u * modinv(denom, q) % q
    session.state = RequesterState.DONE
    return BlindSigncryptedText(c=session.c, r=session.r, s=s, T=session.T)


def shared_element(ct: BlindSigncryptedText, recipient: KeyPair,
                   signer_pub: GroupElement, params: GroupParams) -> GroupElement:
    """(y_A * T * g^r)^(s * x_C) mod p; equals y_C^u mod p for honest texts."""
    p, q = params.p, params.q
    base = signer_pub * ct.T % p * modexp(params.g, ct.r, p) % p
    return modexp(base, ct.s * recipient.x % q, p)


def unsigncrypt(ct: BlindSigncryptedText, recipient: KeyPair,
                signer_pub: GroupElement, bind_info: bytes,
                params: GroupParams, suite: CryptoSuite) -> bytes:
    """Decrypt-and-verify; returns the message or raises TagMismatch."""
    if not (0 < ct.r < params.q and 0 < ct.s < params.q and 0 < ct.T < params.p):
        raise TagMismatch("value out of range")  # rejects s+q style re-encodings
    shared = shared_element(ct, recipient, signer_pub, params)
    keys = derive_keys(shared, suite)
    m = suite.cipher_decrypt(keys.k1, ct.c)
    if keyed_hash_to_scalar(keys.k2, m, bind_info, params.q, suite) != ct.r:
        raise TagMismatch("keyed-hash check failed")
    return m
