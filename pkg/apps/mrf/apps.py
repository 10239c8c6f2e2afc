from django.apps import AppConfig


class MrfConfig(AppConfig):
    name = "apps.mrf"
    verbose_name = "Potts and Ising fields"
