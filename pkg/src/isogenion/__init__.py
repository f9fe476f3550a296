"""isogenion: isogenies, endomorphism rings and ideal classes for elliptic
curves over small finite fields."""

__version__ = "0.1.0"
