"""Command-line driver: every scheme, plus file-based blind sessions.

All cryptographic logic lives in the library modules; this module only moves
bytes between files and library calls. Exit codes: 0 success, 1 verification
or tag failure, 2 usage/input error.

Multi-invocation blind sessions need the one-shot nonces (k_tilde, u) to
survive between processes. They are persisted only under --test-mode, in a
state file encrypted and MAC'd under a key derived from the seed; in normal
mode the whole session must run inside one process, so the session
subcommands refuse to write state.
"""

from __future__ import annotations

import argparse
import hashlib
import hmac
import json
import random
import secrets
import sys
from dataclasses import dataclass
from pathlib import Path

from . import blind_sdss, blind_signcrypt, harness, sdss, wire_codec, zheng
from .blind_sdss import RequesterState, SignerState
from .crypto_suite import SplitKeys, get_suite, std_suite
from .errors import (
    BadGenerator,
    NotPrime,
    OrderMismatch,
    ProtocolError,
    TagMismatch,
)
from .group_math import GroupParams, generate_params, int_to_bytes, named_params, validate_params

_STATE_LABEL = b"blindsigncrypt-state-v1:"

_SCHEME_NAMES = {"blind": "blind_sdss", "bsc": "blind_signcrypt"}


class VerifyFailure(Exception):
    """Command-level rejection; mapped to exit code 1."""


class UsageFailure(Exception):
    """Command-level usage/input problem; mapped to exit code 2."""


@dataclass
class CliConfig:
    test_mode: bool
    seed: int | None
    suite_id: str
    rng: object


# -- file helpers ----------------------------------------------------------------

def _read_params(value: str) -> GroupParams:
    if value in ("toy23", "desk512"):
        return named_params(value)
    obj, _ = wire_codec.decode(wire_codec.dearmor(Path(value).read_text()))
    if not isinstance(obj, GroupParams):
        raise UsageFailure(f"{value} does not contain group parameters")
    return obj


def _read_key(path: str) -> sdss.KeyPair:
    data = json.loads(Path(path).read_text())
    return sdss.KeyPair(x=data["x"], y=data["y"])


def _read_pub(path: str) -> int:
    obj, _ = wire_codec.decode(wire_codec.dearmor(Path(path).read_text()))
    if not isinstance(obj, wire_codec.PubKeyMsg):
        raise UsageFailure(f"{path} does not contain a public key")
    return obj.y


def _read_wire(path: str, expect: type):
    obj, suite_id = wire_codec.decode(wire_codec.dearmor(Path(path).read_text()))
    if not isinstance(obj, expect):
        raise UsageFailure(f"{path} holds {type(obj).__name__}, expected {expect.__name__}")
    return obj, suite_id


def _write_wire(path: str, obj, suite_id: str) -> None:
    Path(path).write_text(wire_codec.armor(wire_codec.encode(obj, suite_id)))


# -- encrypted session state (test mode only) -------------------------------------

def _state_key(seed: int) -> bytes:
    return hashlib.sha256(_STATE_LABEL + str(seed).encode()).digest()


def _save_state(path: str, state: dict, cfg: CliConfig) -> None:
    if not cfg.test_mode:
        raise UsageFailure(
            "session state files exist only under --test-mode; in normal mode "
            "run the whole session in one process")
    key = _state_key(cfg.seed or 0)
    suite = std_suite()
    ct = suite.cipher_encrypt(key, json.dumps(state, sort_keys=True).encode())
    tag = suite.keyed_hash(key, ct)
    Path(path).write_text(wire_codec.armor(tag + ct))


def _load_state(path: str, cfg: CliConfig) -> dict:
    if not cfg.test_mode:
        raise UsageFailure("session state files exist only under --test-mode")
    blob = wire_codec.dearmor(Path(path).read_text())
    key = _state_key(cfg.seed or 0)
    suite = std_suite()
    tag, ct = blob[:32], blob[32:]
    if not hmac.compare_digest(tag, suite.keyed_hash(key, ct)):
        raise UsageFailure(f"cannot open {path}: wrong seed or corrupted state")
    return json.loads(suite.cipher_decrypt(key, ct))


def _bind_info(args, recipient_pub: int) -> bytes:
    if args.bind_info is not None:
        return args.bind_info.encode()
    return int_to_bytes(recipient_pub)  # default: recipient identity


# -- commands ----------------------------------------------------------------------

def cmd_params_gen(args, cfg: CliConfig) -> int:
    params = generate_params(args.bits_p, args.bits_q, cfg.rng)
    _write_wire(args.out, params, cfg.suite_id)
    print(f"wrote {args.bits_p}/{args.bits_q}-bit parameters to {args.out}")
    return 0


def cmd_params_validate(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    try:
        validate_params((params.p, params.q, params.g))
    except (NotPrime, OrderMismatch, BadGenerator) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    print("parameters ok")
    return 0


def cmd_keygen(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    key = sdss.keygen(params, cfg.rng)
    Path(args.out).write_text(json.dumps({"x": key.x, "y": key.y}) + "\n")
    if args.pub_out:
        _write_wire(args.pub_out, wire_codec.PubKeyMsg(y=key.y), cfg.suite_id)
    print(f"wrote key pair to {args.out}")
    return 0


def cmd_sdss_sign(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    key = _read_key(args.key)
    m = Path(args.infile).read_bytes()
    sig = sdss.sign(m, key, params, get_suite(cfg.suite_id), cfg.rng)
    _write_wire(args.out, sig, cfg.suite_id)
    return 0


def cmd_sdss_verify(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    sig, suite_id = _read_wire(args.sig, sdss.SdssSignature)
    m = Path(args.infile).read_bytes()
    if not sdss.verify(m, sig, _read_pub(args.pub), params, get_suite(suite_id)):
        raise VerifyFailure("signature rejected")
    print("signature ok")
    return 0


def cmd_zheng_seal(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    key = _read_key(args.key)
    recipient_pub = _read_pub(args.recipient_pub)
    m = Path(args.infile).read_bytes()
    ct = zheng.signcrypt(m, key, recipient_pub, _bind_info(args, recipient_pub),
                         params, get_suite(cfg.suite_id), cfg.rng)
    _write_wire(args.out, ct, cfg.suite_id)
    return 0


def cmd_zheng_open(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    key = _read_key(args.key)
    ct, suite_id = _read_wire(args.infile, zheng.SigncryptedText)
    m = zheng.unsigncrypt(ct, key, _read_pub(args.sender_pub),
                          _bind_info(args, key.y), params, get_suite(suite_id))
    Path(args.out).write_bytes(m)
    print(f"recovered {len(m)} bytes")
    return 0


def cmd_session_commit(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    key = _read_key(args.key)
    session, commit = blind_sdss.signer_commit(key, params, cfg.rng)
    _save_state(args.state_out, {
        "role": "signer", "k_tilde": session.k_tilde, "z": session.z,
        "state": session.state.value,
    }, cfg)
    _write_wire(args.out, commit, cfg.suite_id)
    return 0


def cmd_blind_challenge(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    commit, _ = _read_wire(args.commit, blind_sdss.CommitMsg)
    signer_pub = _read_pub(args.signer_pub)
    m = Path(args.infile).read_bytes()
    session, challenge = blind_sdss.requester_challenge(
        m, commit.z, signer_pub, params, get_suite(cfg.suite_id), cfg.rng)
    _save_state(args.state_out, {
        "role": "requester", "scheme": "blind", "suite_id": cfg.suite_id,
        "m": m.hex(), "signer_pub": signer_pub, "z": session.z, "u": session.u,
        "alpha": session.alpha, "beta": session.beta, "r": session.r,
        "r_bar": session.r_bar, "T": session.T, "state": session.state.value,
    }, cfg)
    _write_wire(args.out, challenge, cfg.suite_id)
    return 0


def cmd_session_respond(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    key = _read_key(args.key)
    st = _load_state(args.state, cfg)
    if st.get("role") != "signer":
        raise UsageFailure("state file is not a signer session")
    session = blind_sdss.SignerSession(params=params, k_tilde=st["k_tilde"],
                                       z=st["z"], state=SignerState(st["state"]))
    challenge, _ = _read_wire(args.challenge, blind_sdss.ChallengeMsg)
    response = blind_sdss.signer_respond(session, challenge.r_bar, key)
    _save_state(args.state, {**st, "state": session.state.value}, cfg)
    _write_wire(args.out, response, cfg.suite_id)
    return 0


def cmd_blind_finalize(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    st = _load_state(args.state, cfg)
    if st.get("role") != "requester" or st.get("scheme") != "blind":
        raise UsageFailure("state file is not a blind-signature requester session")
    session = blind_sdss.RequesterSession(
        params=params, m=bytes.fromhex(st["m"]), signer_pub=st["signer_pub"],
        z=st["z"], u=st["u"], alpha=st["alpha"], beta=st["beta"], r=st["r"],
        r_bar=st["r_bar"], T=st["T"], state=RequesterState(st["state"]))
    response, _ = _read_wire(args.response, blind_sdss.ResponseMsg)
    sig = blind_sdss.requester_finalize(session, response.s_bar, params)
    _save_state(args.state, {**st, "state": session.state.value}, cfg)
    suite = get_suite(st["suite_id"])
    if not blind_sdss.verify(session.m, sig, session.signer_pub, params, suite):
        raise VerifyFailure("unblinded signature failed verification")
    _write_wire(args.out, sig, st["suite_id"])
    return 0


def cmd_blind_verify(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    sig, suite_id = _read_wire(args.sig, blind_sdss.BlindSignature)
    m = Path(args.infile).read_bytes()
    if not blind_sdss.verify(m, sig, _read_pub(args.signer_pub), params,
                             get_suite(suite_id)):
        raise VerifyFailure("signature rejected")
    print("signature ok")
    return 0


def cmd_bsc_challenge(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    commit, _ = _read_wire(args.commit, blind_sdss.CommitMsg)
    recipient_pub = _read_pub(args.recipient_pub)
    bind_info = _bind_info(args, recipient_pub)
    m = Path(args.infile).read_bytes()
    session, challenge = blind_signcrypt.bsc_requester_challenge(
        m, commit.z, recipient_pub, bind_info, params,
        get_suite(cfg.suite_id), cfg.rng)
    _save_state(args.state_out, {
        "role": "requester", "scheme": "bsc", "suite_id": cfg.suite_id,
        "bind_info": bind_info.hex(), "u": session.u, "alpha": session.alpha,
        "beta": session.beta, "r": session.r, "r_bar": session.r_bar,
        "T": session.T, "k1": session.keys.k1.hex(), "k2": session.keys.k2.hex(),
        "c": session.c.hex(), "state": session.state.value,
    }, cfg)
    _write_wire(args.out, challenge, cfg.suite_id)
    return 0


def cmd_bsc_finalize(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    st = _load_state(args.state, cfg)
    if st.get("role") != "requester" or st.get("scheme") != "bsc":
        raise UsageFailure("state file is not a blind-signcryption requester session")
    session = blind_signcrypt.BscRequesterSession(
        params=params, suite=get_suite(st["suite_id"]),
        bind_info=bytes.fromhex(st["bind_info"]), u=st["u"], alpha=st["alpha"],
        beta=st["beta"], r=st["r"], r_bar=st["r_bar"], T=st["T"],
        keys=SplitKeys(k1=bytes.fromhex(st["k1"]), k2=bytes.fromhex(st["k2"])),
        c=bytes.fromhex(st["c"]), state=RequesterState(st["state"]))
    response, _ = _read_wire(args.response, blind_sdss.ResponseMsg)
    ct = blind_signcrypt.bsc_requester_finalize(session, response.s_bar, params)
    _save_state(args.state, {**st, "state": session.state.value}, cfg)
    _write_wire(args.out, ct, st["suite_id"])
    return 0


def cmd_bsc_open(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    key = _read_key(args.key)
    ct, suite_id = _read_wire(args.infile, blind_signcrypt.BlindSigncryptedText)
    m = blind_signcrypt.unsigncrypt(ct, key, _read_pub(args.signer_pub),
                                    _bind_info(args, key.y), params,
                                    get_suite(suite_id))
    Path(args.out).write_bytes(m)
    print(f"recovered {len(m)} bytes")
    return 0


def cmd_bench(args, cfg: CliConfig) -> int:
    params = _read_params(args.params)
    report = harness.measure_exponentiation_counts(
        _SCHEME_NAMES[args.scheme], params, get_suite(cfg.suite_id), cfg.rng)
    for line in report.lines():
        if args.party and line.startswith("party ") and not line.startswith(f"party {args.party}:"):
            continue
        print(line)
    return 0


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blindsigncrypt",
        description="Blind signcryption toolkit: SDSS / Zheng / blind sessions")
    parser.add_argument("--test-mode", action="store_true",
                        help="deterministic seeded RNG and persistable session state")
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed (requires --test-mode)")
    parser.add_argument("--suite", default="std-v1", choices=["std-v1", "toy-v1"],
                        help="primitive suite for produced messages")
    sub = parser.add_subparsers(dest="command", required=True)

    params = sub.add_parser("params", help="group parameter handling")
    psub = params.add_subparsers(dest="subcommand", required=True)
    gen = psub.add_parser("gen")
    gen.add_argument("--bits-p", type=int, default=512)
    gen.add_argument("--bits-q", type=int, default=160)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_params_gen)
    val = psub.add_parser("validate")
    val.add_argument("--params", required=True)
    val.set_defaults(func=cmd_params_validate)

    keygen_p = sub.add_parser("keygen", help="generate a key pair")
    keygen_p.add_argument("--params", required=True)
    keygen_p.add_argument("--out", required=True)
    keygen_p.add_argument("--pub-out")
    keygen_p.set_defaults(func=cmd_keygen)

    sdss_p = sub.add_parser("sdss", help="shortened DSS signatures")
    ssub = sdss_p.add_subparsers(dest="subcommand", required=True)
    s_sign = ssub.add_parser("sign")
    _add(s_sign, "--params", "--key", "--in", "--out")
    s_sign.set_defaults(func=cmd_sdss_sign)
    s_ver = ssub.add_parser("verify")
    _add(s_ver, "--params", "--pub", "--in", "--sig")
    s_ver.set_defaults(func=cmd_sdss_verify)

    zheng_p = sub.add_parser("zheng", help="signcryption")
    zsub = zheng_p.add_subparsers(dest="subcommand", required=True)
    z_seal = zsub.add_parser("seal")
    _add(z_seal, "--params", "--key", "--recipient-pub", "--in", "--out")
    z_seal.add_argument("--bind-info")
    z_seal.set_defaults(func=cmd_zheng_seal)
    z_open = zsub.add_parser("open")
    _add(z_open, "--params", "--key", "--sender-pub", "--in", "--out")
    z_open.add_argument("--bind-info")
    z_open.set_defaults(func=cmd_zheng_open)

    blind = sub.add_parser("blind", help="blind signature session")
    bsub = blind.add_subparsers(dest="subcommand", required=True)
    b_commit = bsub.add_parser("commit")
    _add(b_commit, "--params", "--key", "--state-out", "--out")
    b_commit.set_defaults(func=cmd_session_commit)
    b_chal = bsub.add_parser("challenge")
    _add(b_chal, "--params", "--signer-pub", "--in", "--commit", "--state-out", "--out")
    b_chal.set_defaults(func=cmd_blind_challenge)
    b_resp = bsub.add_parser("respond")
    _add(b_resp, "--params", "--key", "--state", "--challenge", "--out")
    b_resp.set_defaults(func=cmd_session_respond)
    b_fin = bsub.add_parser("finalize")
    _add(b_fin, "--params", "--state", "--response", "--out")
    b_fin.set_defaults(func=cmd_blind_finalize)
    b_ver = bsub.add_parser("verify")
    _add(b_ver, "--params", "--signer-pub", "--in", "--sig")
    b_ver.set_defaults(func=cmd_blind_verify)

    bsc = sub.add_parser("bsc", help="blind signcryption session")
    csub = bsc.add_subparsers(dest="subcommand", required=True)
    c_commit = csub.add_parser("commit")
    _add(c_commit, "--params", "--key", "--state-out", "--out")
    c_commit.set_defaults(func=cmd_session_commit)
    c_chal = csub.add_parser("challenge")
    _add(c_chal, "--params", "--recipient-pub", "--in", "--commit", "--state-out", "--out")
    c_chal.add_argument("--bind-info")
    c_chal.set_defaults(func=cmd_bsc_challenge)
    c_resp = csub.add_parser("respond")
    _add(c_resp, "--params", "--key", "--state", "--challenge", "--out")
    c_resp.set_defaults(func=cmd_session_respond)
    c_fin = csub.add_parser("finalize")
    _add(c_fin, "--params", "--state", "--response", "--out")
    c_fin.set_defaults(func=cmd_bsc_finalize)
    c_open = csub.add_parser("open")
    _add(c_open, "--params", "--key", "--signer-pub", "--in", "--out")
    c_open.add_argument("--bind-info")
    c_open.set_defaults(func=cmd_bsc_open)

    bench = sub.add_parser("bench", help="per-party modular-exponentiation counts")
    bench.add_argument("--scheme", required=True, choices=sorted(_SCHEME_NAMES))
    bench.add_argument("--params", required=True)
    bench.add_argument("--party", choices=["A", "B", "C", "verify"])
    bench.set_defaults(func=cmd_bench)

    return parser


def _add(subparser, *flags) -> None:
    for flag in flags:
        dest = {"--in": "infile"}.get(flag)
        if dest:
            subparser.add_argument(flag, dest=dest, required=True)
        else:
            subparser.add_argument(flag, required=True)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.seed is not None and not args.test_mode:
        print("error: --seed requires --test-mode", file=sys.stderr)
        return 2
    rng = random.Random(args.seed) if args.test_mode else secrets.SystemRandom()
    cfg = CliConfig(test_mode=args.test_mode, seed=args.seed,
                    suite_id=args.suite, rng=rng)

    try:
        return args.func(args, cfg)
    except (TagMismatch, VerifyFailure) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return 1
    except UsageFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ProtocolError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
