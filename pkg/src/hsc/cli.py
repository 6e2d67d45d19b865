"""Command line for the signcryption toolkit.

    hsc setup         create system params and the KGC master key
    hsc pki-keygen    generate a PKI key pair
    hsc clc-extract   KGC role: issue a partial private key for an identity
    hsc clc-finalize  user role: finish a certificateless key pair
    hsc export-pub    write the public part of a key pair
    hsc signcrypt     signcrypt a file (--mode pchs|cphs)
    hsc unsigncrypt   unsigncrypt a file; exits 3 and prints REJECT on ⊥
    hsc serve         run one demo server session
    hsc client        run one demo client session
    hsc bench         timing and operation-count report

Exit codes: 0 success, 2 usage, 3 cryptographic rejection, 4 I/O or
decode failure.  Failures print one machine-readable line to stderr.

Commands refuse to overwrite existing output files unless --force is
given.  If the environment variable HSC_SEED is set (test builds only),
all randomness derives from that seed and every run is reproducible --
never set it in real use.
"""

from __future__ import annotations

import argparse
import os
import random
import secrets
import sys
from pathlib import Path

from . import bench, codec, keys, netdemo
from .group import DecodeError
from .keys import DegenerateKeyError, PartialKeyError
from .signcryption import (
    MessageSizeError,
    RejectedCiphertext,
    cphs_signcrypt,
    cphs_unsigncrypt,
    pchs_signcrypt,
    pchs_unsigncrypt,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CRYPTO = 3
EXIT_IO = 4


def _rng():
    seed = os.environ.get("HSC_SEED")
    if seed is not None:
        return random.Random(int(seed))
    return secrets.SystemRandom()


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _write(path: str, data: bytes, force: bool) -> None:
    target = Path(path)
    if target.exists() and not force:
        raise FileExistsError(f"{path} exists; pass --force to overwrite")
    target.write_bytes(data)


def _load_params(path: str) -> keys.SystemParams:
    return codec.decode_params(_read(path))


def _identity(value: str) -> bytes:
    return value.encode("utf-8")


# -- subcommands ---------------------------------------------------------------


def _cmd_setup(args) -> int:
    params, master = keys.setup(args.group, n=args.msg_bits, rng=_rng())
    _write(args.params, codec.encode_params(params), args.force)
    _write(args.out, codec.encode_master(params, master), args.force)
    print(f"params -> {args.params}")
    print(f"master key -> {args.out}")
    return EXIT_OK


def _cmd_pki_keygen(args) -> int:
    params = _load_params(args.params)
    key = keys.pki_keygen(params, _rng())
    _write(args.out, codec.encode_pki_keypair(params, key), args.force)
    print(f"pki key pair -> {args.out}")
    return EXIT_OK


def _cmd_clc_extract(args) -> int:
    params = _load_params(args.params)
    master = codec.decode_master(_read(args.key), params)
    identity = _identity(args.id)
    partial = keys.clc_extract_partial(params, master, identity, _rng())
    _write(args.out, codec.encode_partial_key(params, identity, partial), args.force)
    print(f"partial key for {args.id!r} -> {args.out}")
    return EXIT_OK


def _cmd_clc_finalize(args) -> int:
    params = _load_params(args.params)
    identity, partial = codec.decode_partial_key(_read(args.key), params)
    if args.id is not None and _identity(args.id) != identity:
        raise PartialKeyError(
            f"partial key was issued for {identity!r}, not {args.id!r}"
        )
    rng = _rng()
    while True:
        try:
            key = keys.clc_finalize(params, identity, partial,
                                    params.group.random_scalar(rng))
            break
        except DegenerateKeyError:
            continue
    _write(args.out, codec.encode_clc_keypair(params, key), args.force)
    print(f"clc key pair for {identity!r} -> {args.out}")
    return EXIT_OK


def _cmd_export_pub(args) -> int:
    params = _load_params(args.params)
    data = _read(args.key)
    kind = codec.file_kind(data)
    if kind == codec.FileKind.PKI_KEY:
        key = codec.decode_pki_keypair(data, params)
        out = codec.encode_pki_public(params, key.PK_p)
    elif kind == codec.FileKind.CLC_KEY:
        clc = codec.decode_clc_keypair(data, params)
        out = codec.encode_clc_public(params, clc.identity, clc.public)
    else:
        raise codec.HeaderError(f"cannot export a public key from a {kind.name} file")
    _write(args.out, out, args.force)
    print(f"public export -> {args.out}")
    return EXIT_OK


def _cmd_signcrypt(args) -> int:
    params = _load_params(args.params)
    message = _read(args.infile)
    if args.mode == "pchs":
        sender = codec.decode_pki_keypair(_read(args.key), params)
        peer_id, peer_pub = codec.decode_clc_public(_read(args.peer), params)
        if args.id is not None:
            peer_id = _identity(args.id)
        sigma = pchs_signcrypt(params, sender, peer_id, peer_pub, message, _rng())
    else:
        sender = codec.decode_clc_keypair(_read(args.key), params)
        peer_pk = codec.decode_pki_public(_read(args.peer), params)
        sigma = cphs_signcrypt(params, sender, peer_pk, message, _rng())
    _write(args.out, codec.encode_ciphertext(sigma), args.force)
    print(f"{args.mode} ciphertext ({len(message)} byte message) -> {args.out}")
    return EXIT_OK


def _cmd_unsigncrypt(args) -> int:
    params = _load_params(args.params)
    sigma = codec.decode_ciphertext(_read(args.infile), params)
    if args.mode == "pchs":
        receiver = codec.decode_clc_keypair(_read(args.key), params)
        sender_pk = codec.decode_pki_public(_read(args.peer), params)
        message = pchs_unsigncrypt(params, receiver, sender_pk, sigma)
    else:
        receiver = codec.decode_pki_keypair(_read(args.key), params)
        peer_id, peer_pub = codec.decode_clc_public(_read(args.peer), params)
        if args.id is not None:
            peer_id = _identity(args.id)
        message = cphs_unsigncrypt(params, receiver, peer_id, peer_pub, sigma)
    _write(args.out, message, args.force)
    print(f"ACCEPT {len(message)} bytes -> {args.out}")
    return EXIT_OK


def _session_exit(session: netdemo.DemoSession) -> int:
    print(session.format_transcript())
    print(f"outcome: {session.outcome}")
    if session.outcome == netdemo.OK:
        return EXIT_OK
    if session.outcome in (netdemo.VERIFY_FAILED, netdemo.NEGATIVE_STATUS):
        return EXIT_CRYPTO
    return EXIT_IO


def _cmd_serve(args) -> int:
    params = _load_params(args.params)
    data = _read(args.key)
    key = (codec.decode_clc_keypair(data, params) if args.mode == "pchs"
           else codec.decode_pki_keypair(data, params))
    session = netdemo.run_server(params, key, mode=args.mode,
                                 host=args.host, port=args.port, rng=_rng())
    if session.plaintext is not None:
        print(f"received message: {session.plaintext!r}")
    return _session_exit(session)


def _cmd_client(args) -> int:
    params = _load_params(args.params)
    data = _read(args.key)
    key = (codec.decode_pki_keypair(data, params) if args.mode == "pchs"
           else codec.decode_clc_keypair(data, params))
    message = _read(args.infile)
    session = netdemo.run_client(params, key, message, mode=args.mode,
                                 host=args.host, port=args.port, rng=_rng())
    return _session_exit(session)


def _cmd_bench(args) -> int:
    if args.params is not None:
        params = _load_params(args.params)
    else:
        params, _ = keys.setup("secp256k1", rng=_rng())
    report = bench.bench_run(params, iterations=args.iters, rng=_rng())
    print(report.table())
    if args.out is not None:
        _write(args.out, report.to_csv().encode(), args.force)
        print(f"csv rows -> {args.out}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsc",
        description="heterogeneous PKI<->certificateless signcryption toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("setup", _cmd_setup, "create system params and master key")
    p.add_argument("--group", default="secp256k1",
                   help="group name: secp256k1 or toy-<prime> (default secp256k1)")
    p.add_argument("--msg-bits", type=int, default=keys.DEFAULT_MESSAGE_BITS,
                   help="maximum message length in bits")
    p.add_argument("--params", required=True, help="output path for the params file")
    p.add_argument("--out", required=True, help="output path for the master key")
    p.add_argument("--force", action="store_true", help="overwrite existing files")

    p = add("pki-keygen", _cmd_pki_keygen, "generate a PKI key pair")
    p.add_argument("--params", required=True)
    p.add_argument("--out", required=True, help="output path for the key pair")
    p.add_argument("--force", action="store_true")

    p = add("clc-extract", _cmd_clc_extract, "KGC: issue a partial private key")
    p.add_argument("--params", required=True)
    p.add_argument("--key", required=True, help="master key file")
    p.add_argument("--id", required=True, help="user identity string")
    p.add_argument("--out", required=True, help="output path for the partial key")
    p.add_argument("--force", action="store_true")

    p = add("clc-finalize", _cmd_clc_finalize, "user: finish a CLC key pair")
    p.add_argument("--params", required=True)
    p.add_argument("--key", required=True, help="partial key file")
    p.add_argument("--id", help="expected identity (checked against the file)")
    p.add_argument("--out", required=True, help="output path for the key pair")
    p.add_argument("--force", action="store_true")

    p = add("export-pub", _cmd_export_pub, "export the public half of a key pair")
    p.add_argument("--params", required=True)
    p.add_argument("--key", required=True, help="pki or clc key pair file")
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")

    for name, func, help_text in (
        ("signcrypt", _cmd_signcrypt, "signcrypt a message file"),
        ("unsigncrypt", _cmd_unsigncrypt, "unsigncrypt a ciphertext file"),
    ):
        p = add(name, func, help_text)
        p.add_argument("--mode", choices=("pchs", "cphs"), required=True)
        p.add_argument("--params", required=True)
        p.add_argument("--key", required=True, help="own key pair file")
        p.add_argument("--peer", required=True, help="peer public export file")
        p.add_argument("--id", help="override the peer identity from the export")
        p.add_argument("--in", dest="infile", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--force", action="store_true")

    for name, func, help_text in (
        ("serve", _cmd_serve, "serve one demo session"),
        ("client", _cmd_client, "run the demo client"),
    ):
        p = add(name, func, help_text)
        p.add_argument("--mode", choices=("pchs", "cphs"), default="pchs")
        p.add_argument("--params", required=True)
        p.add_argument("--key", required=True, help="own key pair file")
        p.add_argument("--host", default="127.0.0.1")
        p.add_argument("--port", type=int, default=netdemo.DEFAULT_PORT)
        if name == "client":
            p.add_argument("--in", dest="infile", required=True,
                           help="message file to send")

    p = add("bench", _cmd_bench, "run the benchmark harness")
    p.add_argument("--params", help="params file (default: fresh secp256k1)")
    p.add_argument("--iters", type=int, default=10000,
                   help="iterations for primitive ops (default 10000)")
    p.add_argument("--out", help="write machine-readable CSV here")
    p.add_argument("--force", action="store_true")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RejectedCiphertext:
        print("REJECT", file=sys.stderr)
        return EXIT_CRYPTO
    except (PartialKeyError, DegenerateKeyError) as exc:
        print(f"ERROR crypto: {exc}", file=sys.stderr)
        return EXIT_CRYPTO
    except (codec.CodecError, DecodeError) as exc:
        print(f"ERROR decode: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"ERROR io: {exc}", file=sys.stderr)
        return EXIT_IO
    except MessageSizeError as exc:
        print(f"ERROR usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"ERROR usage: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
