from django.db import models
from django.utils.translation import gettext_lazy as _


class CausalType(models.TextChoices):
    SPACELIKE = "SPACELIKE", _("Spacelike")
    TIMELIKE = "TIMELIKE", _("Timelike")
    LIGHTLIKE = "LIGHTLIKE", _("Lightlike")


class Region(models.TextChoices):
    R1 = "R1", _("Outside the light cone")
    R2 = "R2", _("Inside the future cone")
    R3 = "R3", _("Inside the past cone")
    LIGHT_CONE = "LIGHT_CONE", _("On the light cone")


class FormField(models.TextChoices):
    DELTA = "delta", _("Metric discriminant F^2 - EG")
    LPL_DISC = "lpl_disc", _("Principal BDE discriminant")
    KBAR = "kbar", _("Extended Gaussian curvature")


class LocusKind(models.TextChoices):
    LD = "LD", _("Locus of degeneracy")
    LPL = "LPL", _("Lightlike principal locus")
    PARABOLIC = "PARABOLIC", _("Parabolic set")

    @property
    def field(self) -> "FormField":
        return {
            LocusKind.LD: FormField.DELTA,
            LocusKind.LPL: FormField.LPL_DISC,
            LocusKind.PARABOLIC: FormField.KBAR,
        }[self]


class StopReason(models.TextChoices):
    COMPLETED = "COMPLETED", _("Step budget used")
    DOMAIN_BOUNDARY = "DOMAIN_BOUNDARY", _("Left the parameter domain")
    MASKED = "MASKED", _("Entered a masked region")
    LPL = "LPL", _("Reached the lightlike principal locus")
    UMBILIC = "UMBILIC", _("Reached an umbilic point")
