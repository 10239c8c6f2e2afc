from django.apps import AppConfig


class ForwardConfig(AppConfig):
    name = "apps.forward"
    verbose_name = "Generative models"
