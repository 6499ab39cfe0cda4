import numpy as np

from core.errors import DimensionError


def next_power_of_two(n: int) -> int:
    return 1 if n <= 1 else 1 << (int(n) - 1).bit_length()


def _bit_reversed(n: int) -> np.ndarray:
    levels = n.bit_length() - 1
    index = np.arange(n)
    reversed_index = np.zeros(n, dtype=np.int64)
    for bit in range(levels):
        reversed_index |= ((index >> bit) & 1) << (levels - 1 - bit)
    return reversed_index


def fft(x: np.ndarray) -> np.ndarray:
    """Iterative radix-2 Cooley-Tukey DFT over the last axis (length a power of two)."""
    values = np.asarray(x)
    n = values.shape[-1]
    if n < 1 or n & (n - 1):
        raise DimensionError("fft", values.shape, detail="last axis must be a power of two")
    lead = values.shape[:-1]
    out = values[..., _bit_reversed(n)].astype(np.complex128)

    size = 2
    while size <= n:
        half = size // 2
        twiddle = np.exp(-2j * np.pi * np.arange(half) / size)
        blocks = out.reshape(*lead, n // size, size)
        even = blocks[..., :half]
        odd = blocks[..., half:] * twiddle
        out = np.concatenate([even + odd, even - odd], axis=-1).reshape(*lead, n)
        size *= 2
    return out


def power_spectrum(frames: np.ndarray, n_fft: int) -> np.ndarray:
    """``|DFT|^2 / n_fft`` of zero-padded frames, non-negative bins only."""
    frames = np.asarray(frames, dtype=np.float64)
    if frames.shape[-1] > n_fft:
        raise DimensionError("power_spectrum", frames.shape, (n_fft,), detail="frame longer than FFT size")
    padding = [(0, 0)] * (frames.ndim - 1) + [(0, n_fft - frames.shape[-1])]
    spectrum = fft(np.pad(frames, padding))[..., : n_fft // 2 + 1]
    return (spectrum.real**2 + spectrum.imag**2) / n_fft
