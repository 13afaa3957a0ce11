import random

import pytest

from helpers import ScriptRng
from blindsigncrypt.blind_sdss import (
    BlindSignature,
    RequesterState,
    SignerState,
    View,
    recover_blinding_factors,
    recover_commitment,
    requester_challenge,
    requester_finalize,
    signer_commit,
    signer_respond,
    verify,
)
from blindsigncrypt.errors import (
    BadChallenge,
    BadCommit,
    DegenerateDenominator,
    InconsistentPair,
    InvalidState,
)
from blindsigncrypt.group_math import GroupParams, int_to_bytes, modexp
from blindsigncrypt.sdss import KeyPair, keygen

MSG = b"unlinkable payment order"
ALICE = KeyPair(x=3, y=8)

# order-7 subgroup of Z_29* generated by 16 contains 16^3 = 7, divisible by q;
# used to exercise the commitment retry
P29 = GroupParams(p=29, q=7, g=16)


def pin_blind_hash(stub_suite, u, params, m, value):
    """Pin r = h(g^u mod p || m)."""
    stub_suite.stub_hash(int_to_bytes(modexp(params.g, u, params.p)) + m, value)
    return stub_suite


def run_toy_session(toy, stub_suite, signer_script=(5,), requester_script=(4, 2, 6)):
    suite = pin_blind_hash(stub_suite, 4, toy, MSG, 7)
    signer_session, commit = signer_commit(ALICE, toy, ScriptRng(signer_script))
    requester, challenge = requester_challenge(
        MSG, commit.z, ALICE.y, toy, suite, ScriptRng(requester_script))
    response = signer_respond(signer_session, challenge.r_bar, ALICE)
    sig = requester_finalize(requester, response.s_bar, toy)
    return signer_session, requester, sig, suite


class TestWorkedVectors:
    def test_commit(self, toy):
        session, commit = signer_commit(ALICE, toy, ScriptRng([5]))
        assert commit.z == 9
        assert session.k_tilde == 5
        assert session.state is SignerState.COMMITTED

    def test_challenge(self, toy, stub_suite):
        # u=4, r=7, beta=2, alpha=6: r_bar = 9, T = 9^9 * 2^6 = 13 mod 23
        suite = pin_blind_hash(stub_suite, 4, toy, MSG, 7)
        requester, challenge = requester_challenge(
            MSG, 9, ALICE.y, toy, suite, ScriptRng([4, 2, 6]))
        assert challenge.r_bar == 9
        assert (requester.r, requester.beta, requester.alpha) == (7, 2, 6)
        assert requester.T == 13

    def test_respond(self, toy):
        session, _ = signer_commit(ALICE, toy, ScriptRng([5]))
        response = signer_respond(session, 9, ALICE)
        assert response.s_bar == (3 + 9 * 5) % 11 == 4

    def test_finalize(self, toy, stub_suite):
        # s = u / (r + s_bar + alpha) = 4 * inv(6) = 8 mod 11
        _, requester, sig, _ = run_toy_session(toy, stub_suite)
        assert sig == BlindSignature(r=7, s=8, T=13)

    def test_verify(self, toy, stub_suite):
        # K = (8 * 13 * 2^7)^8 = 18^8 = 16 = g^4 = g^u mod 23
        _, requester, sig, suite = run_toy_session(toy, stub_suite)
        assert recover_commitment(sig, ALICE.y, toy) == 16
        assert verify(MSG, sig, ALICE.y, toy, suite)

    def test_recover_blinding_factors(self, toy, stub_suite):
        signer_session, requester, sig, _ = run_toy_session(toy, stub_suite)
        view = View(z=signer_session.z, r_bar=requester.r_bar, s_bar=4,
                    k_tilde=signer_session.k_tilde)
        alpha, beta = recover_blinding_factors(view, sig, requester.u, toy)
        assert (alpha, beta) == (6, 2)
        assert (alpha, beta) == (requester.alpha, requester.beta)


class TestGuards:
    def test_commit_retries_when_q_divides_z(self):
        # 16^3 mod 29 = 7 = q: first draw must be discarded
        key = keygen(P29, random.Random(0))
        rng = ScriptRng([3, 2])
        session, commit = signer_commit(key, P29, rng)
        assert session.k_tilde == 2
        assert commit.z % P29.q != 0

    def test_requester_rejects_bad_commit(self, toy, suite):
        with pytest.raises(BadCommit):
            requester_challenge(MSG, 11, ALICE.y, toy, suite, random.Random(0))

    def test_requester_rejects_out_of_range_commit(self, toy, suite):
        for z in (0, toy.p, toy.p + 9):
            with pytest.raises(BadCommit):
                requester_challenge(MSG, z, ALICE.y, toy, suite, random.Random(0))

    def test_beta_redrawn_until_challenge_nonzero(self, toy, stub_suite):
        # r=7 and beta=4 give r_bar = 0 mod 11: redraw
        suite = pin_blind_hash(stub_suite, 4, toy, MSG, 7)
        requester, challenge = requester_challenge(
            MSG, 9, ALICE.y, toy, suite, ScriptRng([4, 4, 2, 6]))
        assert challenge.r_bar == 9
        assert requester.beta == 2

    def test_u_redrawn_until_r_nonzero(self, toy, stub_suite):
        suite = pin_blind_hash(stub_suite, 1, toy, MSG, 0)  # u=1 hashes to 0
        suite = pin_blind_hash(suite, 4, toy, MSG, 7)
        requester, _ = requester_challenge(
            MSG, 9, ALICE.y, toy, suite, ScriptRng([1, 4, 2, 6]))
        assert requester.u == 4
        assert requester.r == 7

    def test_zero_challenge_rejected(self, toy):
        session, _ = signer_commit(ALICE, toy, ScriptRng([5]))
        with pytest.raises(BadChallenge):
            signer_respond(session, 0, ALICE)
        # guard failure must not consume the session
        assert signer_respond(session, 9, ALICE).s_bar == 4

    def test_session_reuse_rejected(self, toy):
        session, _ = signer_commit(ALICE, toy, ScriptRng([5]))
        signer_respond(session, 9, ALICE)
        with pytest.raises(InvalidState):
            signer_respond(session, 9, ALICE)

    def test_finalize_reuse_rejected(self, toy, stub_suite):
        _, requester, _, _ = run_toy_session(toy, stub_suite)
        assert requester.state is RequesterState.DONE
        with pytest.raises(InvalidState):
            requester_finalize(requester, 4, toy)

    def test_degenerate_denominator_aborts(self, toy, stub_suite):
        # alpha = -(r + s_bar) mod q makes the unblinding denominator vanish:
        # r=7, s_bar=4, alpha=0
        suite = pin_blind_hash(stub_suite, 4, toy, MSG, 7)
        signer_session, commit = signer_commit(ALICE, toy, ScriptRng([5]))
        requester, challenge = requester_challenge(
            MSG, commit.z, ALICE.y, toy, suite, ScriptRng([4, 2, 0]))
        response = signer_respond(signer_session, challenge.r_bar, ALICE)
        with pytest.raises(DegenerateDenominator):
            requester_finalize(requester, response.s_bar, toy)
        # the session is burned; a repeat does not sneak through
        with pytest.raises(InvalidState):
            requester_finalize(requester, response.s_bar, toy)


def complete_session(key, m, params, suite, rng):
    while True:
        signer_session, commit = signer_commit(key, params, rng)
        requester, challenge = requester_challenge(
            m, commit.z, key.y, params, suite, rng)
        response = signer_respond(signer_session, challenge.r_bar, key)
        try:
            sig = requester_finalize(requester, response.s_bar, params)
        except DegenerateDenominator:
            continue
        return signer_session, requester, response, sig


class TestCompleteness:
    def test_thousand_toy_sessions(self, toy, suite):
        rng = random.Random(7)
        key = keygen(toy, rng)
        for i in range(1000):
            m = rng.randbytes(rng.randrange(48))
            _, requester, _, sig = complete_session(key, m, toy, suite, rng)
            assert verify(m, sig, key.y, toy, suite)
            # the recovered commitment is g^u
            assert recover_commitment(sig, key.y, toy) == modexp(toy.g, requester.u, toy.p)

    def test_thousand_desk_sessions(self, desk, suite):
        rng = random.Random(8)
        key = keygen(desk, rng)
        for i in range(1000):
            m = rng.randbytes(rng.randrange(48))
            _, requester, _, sig = complete_session(key, m, desk, suite, rng)
            assert verify(m, sig, key.y, desk, suite)
            assert recover_commitment(sig, key.y, desk) == modexp(desk.g, requester.u, desk.p)


class TestBlindness:
    def sessions(self, n, params, suite, seed):
        rng = random.Random(seed)
        key = keygen(params, rng)
        out = []
        for _ in range(n):
            signer_session, requester, response, sig = complete_session(
                key, rng.randbytes(24), params, suite, rng)
            view = View(z=signer_session.z, r_bar=requester.r_bar,
                        s_bar=response.s_bar, k_tilde=signer_session.k_tilde)
            out.append((view, requester, sig))
        return out

    def test_cross_session_recovery(self, desk, suite):
        # every view must reconcile with every signature, not just its own
        sessions = self.sessions(8, desk, suite, seed=31)
        for view, _, _ in sessions:
            for _, requester, sig in sessions:
                alpha, beta = recover_blinding_factors(view, sig, requester.u, desk)
                assert 0 <= alpha < desk.q
                assert 0 <= beta < desk.q

    def test_diagonal_recovers_actual_draws(self, toy, suite):
        for view, requester, sig in self.sessions(6, toy, suite, seed=32):
            alpha, beta = recover_blinding_factors(view, sig, requester.u, toy)
            assert (alpha, beta) == (requester.alpha, requester.beta)

    def test_forged_signature_detected(self, desk, suite):
        sessions = self.sessions(2, desk, suite, seed=33)
        view, requester, sig = sessions[0]
        forged = BlindSignature(r=sig.r, s=(sig.s + 1) % desk.q or 1, T=sig.T)
        with pytest.raises(InconsistentPair):
            recover_blinding_factors(view, forged, requester.u, desk)

    def test_zero_s_is_inconsistent(self, toy, suite):
        sessions = self.sessions(2, toy, suite, seed=34)
        view, requester, sig = sessions[0]
        with pytest.raises(InconsistentPair):
            recover_blinding_factors(view, BlindSignature(r=sig.r, s=0, T=sig.T),
                                     requester.u, toy)


class TestVerifyRejection:
    def test_perturbed_inputs_rejected(self, desk, suite):
        rng = random.Random(9)
        key = keygen(desk, rng)
        m = b"tamper target"
        _, _, _, sig = complete_session(key, m, desk, suite, rng)
        assert verify(m, sig, key.y, desk, suite)
        assert not verify(m, BlindSignature(r=sig.r, s=sig.s, T=sig.T ^ 1), key.y, desk, suite)
        assert not verify(m, BlindSignature(r=sig.r ^ 1, s=sig.s, T=sig.T), key.y, desk, suite)
        assert not verify(m + b"x", sig, key.y, desk, suite)

    def test_non_canonical_re_encodings_rejected(self, desk, suite):
        # the same residues presented as s+q or T+p are different wire values
        # and must not verify
        rng = random.Random(10)
        key = keygen(desk, rng)
        m = b"strict ranges"
        _, _, _, sig = complete_session(key, m, desk, suite, rng)
        assert not verify(m, BlindSignature(r=sig.r, s=sig.s + desk.q, T=sig.T), key.y, desk, suite)
        assert not verify(m, BlindSignature(r=sig.r + desk.q, s=sig.s, T=sig.T), key.y, desk, suite)
        assert not verify(m, BlindSignature(r=sig.r, s=sig.s, T=sig.T + desk.p), key.y, desk, suite)
        assert not verify(m, BlindSignature(r=sig.r, s=0, T=sig.T), key.y, desk, suite)
