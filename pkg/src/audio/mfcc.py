"""Per-second MFCC features for stereo audio.

Each channel goes through pre-emphasis, Hamming-windowed framing, a power
spectrum, a triangular mel filterbank from 0 Hz to Nyquist, a floored log and
an orthonormal DCT-II. Frames are then averaged per whole second and the two
channels concatenated.
"""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.fft import dct
from scipy.signal import lfilter

from audio.fft import next_power_of_two, power_spectrum
from audio.wav import AudioClip
from core.config import Config
from core.errors import ConfigError, DimensionError
from data.features import AUDIO, FeatureSequence
from utils.logger import get_logger

logger = get_logger()


@dataclass(frozen=True)
class MfccConfig:
    window_ms: float = 25.0
    hop_ms: float = 10.0
    n_mels: int = 26
    n_ceps: int = 13
    preemph: float = 0.97
    log_floor: float = 1e-10

    def __post_init__(self) -> None:
        if self.hop_ms <= 0 or self.window_ms < self.hop_ms:
            raise ConfigError(f"Need window_ms >= hop_ms > 0, got {self.window_ms}/{self.hop_ms}")
        if not 1 <= self.n_ceps <= self.n_mels:
            raise ConfigError(f"Need 1 <= n_ceps <= n_mels, got {self.n_ceps}/{self.n_mels}")
        if self.log_floor <= 0:
            raise ConfigError("log_floor must be positive")

    @classmethod
    def from_config(cls) -> "MfccConfig":
        return cls(
            window_ms=Config.MFCC_WINDOW_MS,
            hop_ms=Config.MFCC_HOP_MS,
            n_mels=Config.MFCC_N_MELS,
            n_ceps=Config.MFCC_N_CEPS,
            preemph=Config.MFCC_PREEMPH,
            log_floor=Config.MFCC_LOG_FLOOR,
        )

    def window_samples(self, sample_rate: int) -> int:
        return int(round(self.window_ms * sample_rate / 1000.0))

    def hop_samples(self, sample_rate: int) -> int:
        return max(1, int(round(self.hop_ms * sample_rate / 1000.0)))


def hz_to_mel(hz):
    return 2595.0 * np.log10(1.0 + np.asarray(hz, dtype=np.float64) / 700.0)


def mel_to_hz(mel):
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(n_mels: int, n_fft: int, sample_rate: int) -> np.ndarray:
    """Triangular filters evenly spaced in mel between 0 Hz and Nyquist."""
    mel_points = np.linspace(0.0, hz_to_mel(sample_rate / 2.0), n_mels + 2)
    bins = np.floor((n_fft + 1) * mel_to_hz(mel_points) / sample_rate).astype(int)
    bank = np.zeros((n_mels, n_fft // 2 + 1))
    for j in range(n_mels):
        left, center, right = bins[j], bins[j + 1], bins[j + 2]
        if center > left:
            bank[j, left:center] = (np.arange(left, center) - left) / (center - left)
        if right > center:
            bank[j, center:right] = (right - np.arange(center, right)) / (right - center)
    return bank


def frame_count(n_samples: int, window: int, hop: int) -> int:
    return (n_samples - window) // hop + 1 if n_samples >= window else 0


def mfcc_channel(samples: np.ndarray, sample_rate: int, cfg: MfccConfig = MfccConfig()) -> np.ndarray:
    """Frames x n_ceps cepstra of one channel."""
    samples = np.asarray(samples, dtype=np.float64).reshape(-1)
    window = cfg.window_samples(sample_rate)
    hop = cfg.hop_samples(sample_rate)
    if samples.shape[0] < window:
        raise DimensionError(
            "mfcc_channel", samples.shape, (window,), detail="clip shorter than one analysis window"
        )

    emphasized = lfilter([1.0, -cfg.preemph], [1.0], samples)
    frames = sliding_window_view(emphasized, window)[::hop] * np.hamming(window)
    n_fft = next_power_of_two(window)
    energies = power_spectrum(frames, n_fft) @ mel_filterbank(cfg.n_mels, n_fft, sample_rate).T
    log_energies = np.log(np.maximum(energies, cfg.log_floor))
    return dct(log_energies, type=2, norm="ortho", axis=-1)[:, : cfg.n_ceps]


def per_second_average(frames: np.ndarray, hop: int, sample_rate: int, seconds: int) -> np.ndarray:
    """Mean of the frames whose start time falls in each whole second."""
    second = (np.arange(frames.shape[0]) * hop) // sample_rate
    keep = second < seconds
    counts = np.bincount(second[keep], minlength=seconds)
    if np.any(counts == 0):
        raise DimensionError(
            "per_second_average", frames.shape, (seconds,), detail="some second has no frame"
        )
    sums = np.zeros((seconds, frames.shape[1]))
    np.add.at(sums, second[keep], frames[keep])
    return sums / counts[:, None]


def extract_audio_features(
    clip: AudioClip, cfg: MfccConfig = MfccConfig(), episode_id: str = ""
) -> FeatureSequence:
    """One row per whole second: channel-0 cepstra followed by channel-1 cepstra."""
    seconds = clip.n_samples // clip.sample_rate
    if seconds < 1:
        raise DimensionError(
            "extract_audio_features", (clip.n_samples,), (clip.sample_rate,),
            detail="clip shorter than one second",
        )
    hop = cfg.hop_samples(clip.sample_rate)
    per_channel = [
        per_second_average(mfcc_channel(channel, clip.sample_rate, cfg), hop, clip.sample_rate, seconds)
        for channel in clip.samples
    ]
    if len(per_channel) == 1:
        per_channel = per_channel * 2
    logger.debug(f"MFCC for {episode_id or '<clip>'}: {seconds} seconds from {clip.channels} channel(s)")
    return FeatureSequence(episode_id, AUDIO, np.concatenate(per_channel, axis=1))
