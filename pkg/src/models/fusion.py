"""Architectures: context gating, a fusion stage, and the LSTM prediction layer.

Every kind gates each of its modalities, fuses them into one per-step vector,
runs the prediction LSTM over it, and reads ``y'_t = W_o h_t`` off each hidden
state. Fusion stages:

* unimodal: one embedding of the gated modality
* low: one embedding over the concatenated gated modalities
* mid: visual, audio and joint embeddings, concatenated
* high: one encoder LSTM per gated modality, hidden states concatenated and
  linearly projected to ``embed_dim``
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.errors import DimensionError, LengthMismatchError, MissingModalityError
from data.features import FeatureSequence
from layers.embedding import EmbedCache, Embedding, embed, embed_backward
from layers.gating import ContextGating, GateCache, context_gate, context_gate_backward
from layers.lstm import (
    LSTMCell,
    LSTMStepCache,
    lstm_backward_through_time,
    lstm_forward_sequence,
)
from models.spec import (
    HIGH_FUSION,
    LOW_FUSION,
    MID_FUSION,
    ModelSpec,
    ModelState,
    PredictionSeries,
)
from numcore.ops import affine_backward, affine_forward, concat, split
from numcore.params import Param, glorot_init
from utils.logger import get_logger

logger = get_logger()


class _Streams:
    """Hands out consecutive PRNG sub-stream ids so each tensor draws independently."""

    def __init__(self) -> None:
        self._next = 0

    def __call__(self) -> int:
        self._next += 1
        return self._next


def build(spec: ModelSpec, seed: int) -> ModelState:
    """Create a fresh parameter set for ``spec``; pure in ``(spec, seed)``."""
    streams = _Streams()
    params: Dict[str, Param] = {}

    def add(*new: Param) -> None:
        for param in new:
            params[param.name] = param

    dims = {"visual": spec.visual_dim, "audio": spec.audio_dim}
    for modality in spec.modalities:
        gate = ContextGating.create(f"gate.{modality}", dims[modality], seed, streams())
        add(gate.W, gate.b)

    e = spec.embed_dim
    if spec.kind == MID_FUSION:
        for modality in ("visual", "audio"):
            layer = Embedding.create(f"embed.{modality}", dims[modality], e, seed, streams())
            add(layer.W, layer.b)
        joint = Embedding.create(
            "embed.joint", spec.visual_dim + spec.audio_dim, e, seed, streams()
        )
        add(joint.W, joint.b)
        predictor_in = 3 * e
    elif spec.kind == HIGH_FUSION:
        for modality in ("visual", "audio"):
            encoder = LSTMCell.create(
                f"encoder.{modality}", dims[modality], spec.hidden, seed, streams()
            )
            add(encoder.T, encoder.bias)
        add(
            Param("fuse.W", glorot_init(e, 2 * spec.hidden, seed, streams())),
            Param("fuse.b", np.zeros(e)),
        )
        predictor_in = e
    else:
        # unimodal and low fusion share one embedding over the (concatenated) input
        layer = Embedding.create(
            "embed", spec.visual_dim + spec.audio_dim, e, seed, streams()
        )
        add(layer.W, layer.b)
        predictor_in = e

    predictor = LSTMCell.create("predictor", predictor_in, spec.hidden, seed, streams())
    add(predictor.T, predictor.bias)
    add(Param("head.W", glorot_init(1, spec.hidden, seed, streams())))
    if spec.output_bias:
        add(Param("head.b", np.zeros(1)))

    logger.debug(
        f"Built {spec.kind} model: {len(params)} tensors, "
        f"{sum(p.size for p in params.values())} parameters"
    )
    return ModelState(spec=spec, params=params)


@dataclass
class _Network:
    gates: Dict[str, ContextGating]
    embeds: Dict[str, Embedding]
    encoders: Dict[str, LSTMCell]
    fuse: Optional[Tuple[Param, Param]]
    predictor: LSTMCell
    head_W: Param
    head_b: Optional[Param]


def _network(model: ModelState) -> _Network:
    p = model.params
    spec = model.spec
    gates = {m: ContextGating(p[f"gate.{m}.W"], p[f"gate.{m}.b"]) for m in spec.modalities}
    embeds: Dict[str, Embedding] = {}
    encoders: Dict[str, LSTMCell] = {}
    fuse = None
    if spec.kind == MID_FUSION:
        for name in ("visual", "audio", "joint"):
            embeds[name] = Embedding(p[f"embed.{name}.W"], p[f"embed.{name}.b"])
    elif spec.kind == HIGH_FUSION:
        for name in ("visual", "audio"):
            encoders[name] = LSTMCell(
                p[f"encoder.{name}.T"], p[f"encoder.{name}.bias"], spec.hidden
            )
        fuse = (p["fuse.W"], p["fuse.b"])
    else:
        embeds["embed"] = Embedding(p["embed.W"], p["embed.b"])
    return _Network(
        gates=gates,
        embeds=embeds,
        encoders=encoders,
        fuse=fuse,
        predictor=LSTMCell(p["predictor.T"], p["predictor.bias"], spec.hidden),
        head_W=p["head.W"],
        head_b=p.get("head.b"),
    )


@dataclass
class ForwardCache:
    steps: int
    batch_shape: tuple
    gates: Dict[str, GateCache] = field(default_factory=dict)
    embeds: Dict[str, EmbedCache] = field(default_factory=dict)
    encoders: Dict[str, List[LSTMStepCache]] = field(default_factory=dict)
    fuse_input: Optional[np.ndarray] = None
    predictor: List[LSTMStepCache] = field(default_factory=list)
    hidden: Optional[np.ndarray] = None


def _check_inputs(
    spec: ModelSpec, visual: Optional[np.ndarray], audio: Optional[np.ndarray]
) -> Dict[str, np.ndarray]:
    provided = {"visual": visual, "audio": audio}
    dims = {"visual": spec.visual_dim, "audio": spec.audio_dim}
    inputs: Dict[str, np.ndarray] = {}
    for modality in spec.modalities:
        array = provided[modality]
        if array is None:
            raise MissingModalityError(f"{spec.kind} model requires {modality} features")
        array = np.asarray(array, dtype=np.float64)
        if array.ndim < 2 or array.shape[-1] != dims[modality]:
            raise DimensionError(
                f"forward ({modality})", array.shape, (dims[modality],),
                detail="expected (T, ..., dim)",
            )
        inputs[modality] = array
    if len(inputs) == 2 and inputs["visual"].shape[:-1] != inputs["audio"].shape[:-1]:
        raise LengthMismatchError(
            f"visual {inputs['visual'].shape[:-1]} and audio "
            f"{inputs['audio'].shape[:-1]} sequences are not aligned"
        )
    return inputs


def forward_batch(
    model: ModelState,
    visual: Optional[np.ndarray] = None,
    audio: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, ForwardCache]:
    """Predict for aligned inputs shaped ``(T, *batch, dim)``; returns ``(T, *batch)``."""
    spec = model.spec
    inputs = _check_inputs(spec, visual, audio)
    first = next(iter(inputs.values()))
    steps, batch_shape = first.shape[0], first.shape[1:-1]
    cache = ForwardCache(steps=steps, batch_shape=batch_shape)
    if steps == 0:
        return np.zeros((0,) + batch_shape), cache

    net = _network(model)
    gated: Dict[str, np.ndarray] = {}
    for modality, array in inputs.items():
        gated[modality], cache.gates[modality] = context_gate(net.gates[modality], array)

    if spec.kind == MID_FUSION:
        ev, cache.embeds["visual"] = embed(net.embeds["visual"], gated["visual"])
        ea, cache.embeds["audio"] = embed(net.embeds["audio"], gated["audio"])
        ej, cache.embeds["joint"] = embed(
            net.embeds["joint"], concat(gated["visual"], gated["audio"])
        )
        fused = concat(concat(ev, ea), ej)
    elif spec.kind == HIGH_FUSION:
        hv, cache.encoders["visual"] = lstm_forward_sequence(
            net.encoders["visual"], gated["visual"]
        )
        ha, cache.encoders["audio"] = lstm_forward_sequence(
            net.encoders["audio"], gated["audio"]
        )
        cache.fuse_input = concat(hv, ha)
        fuse_W, fuse_b = net.fuse  # type: ignore[misc]
        fused = affine_forward(cache.fuse_input, fuse_W.value, fuse_b.value)
    elif spec.kind == LOW_FUSION:
        fused, cache.embeds["embed"] = embed(
            net.embeds["embed"], concat(gated["visual"], gated["audio"])
        )
    else:
        (only,) = gated.values()
        fused, cache.embeds["embed"] = embed(net.embeds["embed"], only)

    cache.hidden, cache.predictor = lstm_forward_sequence(net.predictor, fused)
    head_b = net.head_b.value if net.head_b is not None else np.zeros(1)
    pred = affine_forward(cache.hidden, net.head_W.value, head_b)[..., 0]
    return pred, cache


def backward_batch(model: ModelState, cache: ForwardCache, upstream: np.ndarray) -> None:
    """Accumulate ``dL/dparams`` for ``upstream = dL/dpred`` shaped like the prediction."""
    upstream = np.asarray(upstream, dtype=np.float64)
    expected = (cache.steps,) + tuple(cache.batch_shape)
    if upstream.shape != expected:
        raise DimensionError("backward", upstream.shape, expected)
    if cache.steps == 0:
        return

    spec = model.spec
    net = _network(model)
    d_hidden, dW, db = affine_backward(cache.hidden, net.head_W.value, upstream[..., None])
    net.head_W.grad += dW
    if net.head_b is not None:
        net.head_b.grad += db
    d_fused = lstm_backward_through_time(net.predictor, cache.predictor, d_hidden)

    d_gated: Dict[str, np.ndarray] = {}
    if spec.kind == MID_FUSION:
        d_ev, rest = split(d_fused, spec.embed_dim)
        d_ea, d_ej = split(rest, spec.embed_dim)
        d_joint = embed_backward(net.embeds["joint"], cache.embeds["joint"], d_ej)
        d_jv, d_ja = split(d_joint, spec.visual_dim)
        d_gated["visual"] = embed_backward(net.embeds["visual"], cache.embeds["visual"], d_ev) + d_jv
        d_gated["audio"] = embed_backward(net.embeds["audio"], cache.embeds["audio"], d_ea) + d_ja
    elif spec.kind == HIGH_FUSION:
        fuse_W, fuse_b = net.fuse  # type: ignore[misc]
        d_fuse_in, dW, db = affine_backward(cache.fuse_input, fuse_W.value, d_fused)
        fuse_W.grad += dW
        fuse_b.grad += db
        d_hv, d_ha = split(d_fuse_in, spec.hidden)
        d_gated["visual"] = lstm_backward_through_time(
            net.encoders["visual"], cache.encoders["visual"], d_hv
        )
        d_gated["audio"] = lstm_backward_through_time(
            net.encoders["audio"], cache.encoders["audio"], d_ha
        )
    elif spec.kind == LOW_FUSION:
        d_cat = embed_backward(net.embeds["embed"], cache.embeds["embed"], d_fused)
        d_gated["visual"], d_gated["audio"] = split(d_cat, spec.visual_dim)
    else:
        (modality,) = spec.modalities
        d_gated[modality] = embed_backward(net.embeds["embed"], cache.embeds["embed"], d_fused)

    for modality, grad in d_gated.items():
        context_gate_backward(net.gates[modality], cache.gates[modality], grad)


def _episode_id(*sequences: Optional[FeatureSequence]) -> str:
    for sequence in sequences:
        if sequence is not None:
            return sequence.episode_id
    return ""


def forward_sequence(
    model: ModelState,
    visual: Optional[FeatureSequence] = None,
    audio: Optional[FeatureSequence] = None,
) -> Tuple[PredictionSeries, ForwardCache]:
    """Predict the per-second attractiveness of one whole episode."""
    v = visual.matrix if visual is not None and model.spec.uses_visual else None
    a = audio.matrix if audio is not None and model.spec.uses_audio else None
    if v is not None and a is not None and visual.episode_id != audio.episode_id:  # type: ignore[union-attr]
        raise LengthMismatchError(
            f"visual episode {visual.episode_id!r} paired with audio episode {audio.episode_id!r}"  # type: ignore[union-attr]
        )
    pred, cache = forward_batch(model, v, a)
    return PredictionSeries(pred, _episode_id(visual, audio)), cache


def backward_sequence(
    model: ModelState, cache: ForwardCache, loss_grads: np.ndarray
) -> Dict[str, np.ndarray]:
    """Accumulate gradients for a single-episode forward and return them by name."""
    backward_batch(model, cache, np.asarray(loss_grads, dtype=np.float64).reshape(-1))
    return {name: param.grad for name, param in model.params.items()}
