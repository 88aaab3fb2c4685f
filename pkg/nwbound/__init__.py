"""
nwbound : bornes du biais de l'estimateur de Nadaraya–Watson à bandwidth finie
"""

from nwbound.config import settings

__version__ = settings.APP_VERSION
