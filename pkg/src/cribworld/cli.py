"""Operator entry point.

Exit codes: 0 ok, 2 usage or config problem, 3 agent failure, 4 verification
failure.  Summary lines use a stable key=value format so scripts can grep
them.
"""

from __future__ import annotations

import argparse
import json
import sys

from .agents import AGENT_KINDS, make_agent
from .codec import (apply_noise, build_codebook, decode_stream, encode_utterance,
                    stream_from_lists, stream_to_lists, InvalidSymbolError,
                    InvalidParameterError, SdrStream)
from .probes import (ProbeConfigError, milestone_report, preferential_looking,
                     service_word_latency)
from .rng import Xoshiro256StarStar
from .session import (ActionDecodeError, ConfigError, ReplayParseError, Session,
                      SessionConfig, replay)
from .wire import serve_stdio, serve_tcp

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_AGENT = 3
EXIT_VERIFY = 4


def _load_config(path: str | None) -> SessionConfig:
    if path is None:
        return SessionConfig()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(path, f"cannot read config: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(path, f"config is not valid JSON: {exc}")
    return SessionConfig.from_dict(data)


def _cmd_run(args) -> int:
    try:
        config = _load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        config.seed = args.seed
    if args.record:
        config.record = args.record
    agent = make_agent(args.agent, seed=config.seed,
                       cry_threshold=config.drives.cry_threshold)
    session = Session(config)
    deliveries = narrations = services = 0
    try:
        obs = session.reset()
        for _ in range(args.steps):
            try:
                action = agent.act(obs)
            except Exception as exc:   # agent bugs are not config bugs
                print(f"agent failure: {exc}", file=sys.stderr)
                return EXIT_AGENT
            try:
                obs = session.step(action)
            except ActionDecodeError as exc:
                print(f"agent failure: produced a bad action: {exc}", file=sys.stderr)
                return EXIT_AGENT
            for ev in obs["events"]:
                if ev["type"] == "delivery":
                    deliveries += 1
                elif ev["type"] == "narration_started":
                    narrations += 1
                elif ev["type"] == "word_service":
                    services += 1
    finally:
        session.close()
    print(f"steps={obs['t']} deliveries={deliveries} narrations={narrations} "
          f"word_services={services} final_thirst={obs['intero']['thirst']} "
          f"final_hunger={obs['intero']['hunger']}")
    return EXIT_OK


def _cmd_replay(args) -> int:
    try:
        report = replay(args.log)
    except (OSError, ReplayParseError) as exc:
        print(f"replay error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"replay error: bad header config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if report.ok:
        print(f"replay ok steps={report.steps}")
        return EXIT_OK
    print(f"replay divergence t={report.divergence_t} detail={report.detail}")
    return EXIT_VERIFY


def _cmd_serve(args) -> int:
    if args.stdio:
        return serve_stdio()
    host, _, port = args.listen.rpartition(":")
    host = host or "127.0.0.1"
    try:
        server = serve_tcp(host, int(port))
    except OSError as exc:
        print(f"bind failed: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"listening on {host}:{server.server_address[1]}", file=sys.stderr,
          flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
        server.server_close()
    return EXIT_OK


def _train_agent(agent, config: SessionConfig, steps: int) -> None:
    session = Session(config)
    obs = session.reset()
    for _ in range(steps):
        obs = session.step(agent.act(obs))
    session.close()


def _cmd_probe(args) -> int:
    try:
        config = _load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    agent = make_agent(args.agent, seed=config.seed,
                       cry_threshold=config.drives.cry_threshold)
    if args.train_steps:
        train_cfg = SessionConfig.from_dict(config.to_dict())
        train_cfg.codec_seed = config.codec_seed if config.codec_seed is not None \
            else config.seed
        _train_agent(agent, train_cfg, args.train_steps)
        if hasattr(agent, "probe_mutable"):
            config.codec_seed = train_cfg.codec_seed
    try:
        if args.probe == "looking":
            report = preferential_looking(agent, args.word, args.target,
                                          args.distractor, args.trials,
                                          seed=args.seed, base_config=config)
            print(f"probe=preferential_looking word={args.word} trials={report.trials} "
                  f"score={report.aggregate}")
        elif args.probe == "latency":
            report = service_word_latency(agent, args.word, seed=args.seed,
                                          base_config=config)
            latency = report.aggregate if report.aggregate is not None else "timeout"
            print(f"probe=service_word_latency word={args.word} latency={latency}")
        else:
            report = milestone_report(agent, seed=args.seed, base_config=config)
            agg = report.aggregate
            print(f"probe=milestone first_word_produced={agg['first_word_produced']} "
                  f"produced={','.join(agg['produced_words']) or '-'}")
            for word, score in agg["preferential_looking"].items():
                print(f"  word={word} looking={score} "
                      f"latency={agg['service_latency'][word]}")
    except ProbeConfigError as exc:
        print(f"probe config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def _parse_flip_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _cmd_codec(args) -> int:
    try:
        codebook = build_codebook(args.seed, args.dimension, args.cardinality)
    except InvalidParameterError as exc:
        print(f"codec error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.codec_cmd == "build":
        table = {sym: list(bits) for sym, bits in codebook.table.items()}
        print(json.dumps({"dimension": codebook.dimension,
                          "cardinality_k": codebook.cardinality_k,
                          "seed": codebook.seed, "table": table}, indent=2))
        return EXIT_OK
    if args.codec_cmd == "encode":
        try:
            stream = encode_utterance(codebook, args.text)
        except InvalidSymbolError as exc:
            print(f"codec error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(json.dumps(stream_to_lists(stream)))
        return EXIT_OK
    if args.codec_cmd == "decode":
        try:
            with open(args.stream, "r", encoding="utf-8") as fh:
                frames = json.load(fh)
            stream = stream_from_lists(frames, codebook.dimension)
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            print(f"codec error: cannot read stream: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(decode_stream(codebook, stream))
        return EXIT_OK
    # noise-sweep
    rng = Xoshiro256StarStar(args.seed ^ 0xACCE55)
    print(f"{'flips':>5} {'accuracy':>9}")
    for flips in _parse_flip_range(args.flips):
        correct = 0
        total = 0
        for symbol in codebook.alphabet:
            clean = encode_utterance(codebook, symbol)
            for _ in range(args.trials):
                noisy = SdrStream(
                    frames=tuple(apply_noise(f, flips, rng, codebook.dimension)
                                 for f in clean.frames),
                    dimension=clean.dimension,
                    frames_per_symbol=clean.frames_per_symbol,
                    gap_frames=clean.gap_frames)
                if decode_stream(codebook, noisy) == symbol:
                    correct += 1
                total += 1
        print(f"{flips:>5} {correct / total:>9.4f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cribworld",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an in-process episode")
    run.add_argument("--config", default=None)
    run.add_argument("--agent", choices=AGENT_KINDS, default="reflex")
    run.add_argument("--steps", type=int, default=2000)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--record", default=None)
    run.set_defaults(func=_cmd_run)

    record = sub.add_parser("record", help="run an episode and write its log")
    record.add_argument("--config", default=None)
    record.add_argument("--agent", choices=AGENT_KINDS, default="reflex")
    record.add_argument("--steps", type=int, default=2000)
    record.add_argument("--seed", type=int, default=None)
    record.add_argument("--record", required=True)
    record.set_defaults(func=_cmd_run)

    rep = sub.add_parser("replay", help="verify a recorded episode log")
    rep.add_argument("--log", required=True)
    rep.set_defaults(func=_cmd_replay)

    serve = sub.add_parser("serve", help="serve sessions over the wire protocol")
    group = serve.add_mutually_exclusive_group(required=True)
    group.add_argument("--listen", metavar="HOST:PORT")
    group.add_argument("--stdio", action="store_true")
    serve.set_defaults(func=_cmd_serve)

    probe = sub.add_parser("probe", help="run a developmental probe")
    probe.add_argument("--probe", choices=("looking", "latency", "milestone"),
                       default="milestone")
    probe.add_argument("--agent", choices=AGENT_KINDS, default="reflex")
    probe.add_argument("--config", default=None)
    probe.add_argument("--word", default="WATER")
    probe.add_argument("--target", default="bottle_water")
    probe.add_argument("--distractor", default="toy")
    probe.add_argument("--trials", type=int, default=20)
    probe.add_argument("--seed", type=int, default=0)
    probe.add_argument("--train-steps", type=int, default=0)
    probe.set_defaults(func=_cmd_probe)

    codec = sub.add_parser("codec", help="speech codec utilities")
    codec_sub = codec.add_subparsers(dest="codec_cmd", required=True)
    for name in ("build", "encode", "decode", "noise-sweep"):
        c = codec_sub.add_parser(name)
        c.add_argument("--seed", type=int, default=7)
        c.add_argument("--dimension", type=int, default=512)
        c.add_argument("--cardinality", type=int, default=10)
        if name == "encode":
            c.add_argument("--text", required=True)
        if name == "decode":
            c.add_argument("--stream", required=True)
        if name == "noise-sweep":
            c.add_argument("--flips", default="0..5")
            c.add_argument("--trials", type=int, default=100)
    codec.set_defaults(func=_cmd_codec)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
