package app.ui;

public class ScreenB extends Screen {
    public void onAuthFailure() {
        toast(i18n.get("login.password.incorrect"));
        helpLink.setText(i18n.get("login.password.forgot"));
    }
}
