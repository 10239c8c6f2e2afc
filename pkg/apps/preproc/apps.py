from django.apps import AppConfig


class PreprocConfig(AppConfig):
    name = "apps.preproc"
    verbose_name = "Component pre-processing"
