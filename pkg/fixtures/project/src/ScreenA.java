package app.ui;

public class ScreenA extends Screen {
    public void init() {
        setTitle(i18n.get("login.title"));
        errorBanner.setText(i18n.get("login.password.incorrect"));
    }
}
