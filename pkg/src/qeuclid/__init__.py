from qeuclid import qcoeff
__all__ = ["qcoeff"]
